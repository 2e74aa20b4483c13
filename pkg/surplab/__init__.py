"""MaxCut surplus lab: spectral certificates, dense-subgraph extraction and clique-union stability."""

__version__ = "0.1.0"
