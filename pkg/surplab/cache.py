"""In-memory LRU cache for adjacency spectra, keyed by graph digest."""
from cachetools import LRUCache

from .config import settings

spectrum_cache: LRUCache[tuple[str, str, float], object] = LRUCache(maxsize=settings.SPECTRUM_CACHE_SIZE)
