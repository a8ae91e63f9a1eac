"""
Core utilities shared across all homforge modules
- Exceptions raised by the calculators
- Caching system for factorised boundary matrices
- Fingerprints and timers
"""
import json
import time
import hashlib
import logging
import threading
from datetime import datetime, timedelta
from functools import wraps
from contextlib import contextmanager

logger = logging.getLogger(__name__)


# ============ EXCEPTIONS ============
class HomforgeError(Exception):
    """Base class for every error raised by homforge"""


class CapExceededError(HomforgeError):
    """A construction or matrix would exceed its configured size cap"""

    def __init__(self, what, needed, cap):
        self.what = what
        self.needed = needed
        self.cap = cap
        super().__init__(f'{what} needs {needed} but the cap is {cap}')


class NonCommutingError(HomforgeError):
    """Elements passed to a c-symbol do not pairwise commute"""


class HomomorphismError(HomforgeError):
    """Generator images do not extend to a group homomorphism"""


class UnsupportedFieldError(HomforgeError):
    """Field size outside the supported prime powers"""


class DimensionMismatchError(HomforgeError, ValueError):
    """Operand shapes do not agree"""


class PreconditionError(HomforgeError):
    """An operation was called on input violating its precondition"""


# ============ CACHING SYSTEM ============
class SimpleCache:
    """Thread-safe in-memory cache with optional expiration and size bound
    Entries never change results, they only avoid repeated eliminations
    """
    def __init__(self, default_ttl=None, max_entries=64):
        self._cache = {}
        self._lock = threading.Lock()
        self.default_ttl = default_ttl
        self.max_entries = max_entries
        self.hits = 0
        self.misses = 0

    def _make_key(self, *args, **kwargs):
        """Generate cache key from args"""
        key_data = json.dumps({'args': args, 'kwargs': sorted(kwargs.items())}, sort_keys=True, default=str)
        return hashlib.md5(key_data.encode()).hexdigest()

    def get(self, key):
        """Get item from cache if not expired"""
        with self._lock:
            if key in self._cache:
                item = self._cache[key]
                if item['expires'] is None or datetime.now() < item['expires']:
                    self.hits += 1
                    return item['value']
                del self._cache[key]
            self.misses += 1
        return None

    def set(self, key, value, ttl=None):
        """Set item in cache, evicting the oldest entry when full"""
        if ttl is None:
            ttl = self.default_ttl
        with self._lock:
            if key not in self._cache and len(self._cache) >= self.max_entries:
                oldest = min(self._cache, key=lambda k: self._cache[k]['created'])
                del self._cache[oldest]
            self._cache[key] = {
                'value': value,
                'expires': None if ttl is None else datetime.now() + timedelta(seconds=ttl),
                'created': datetime.now()
            }

    def delete(self, key):
        """Remove item from cache"""
        with self._lock:
            if key in self._cache:
                del self._cache[key]

    def clear(self):
        """Clear all cache"""
        with self._lock:
            self._cache.clear()
            self.hits = 0
            self.misses = 0

    def resize(self, max_entries):
        """Change the size bound, dropping the oldest entries if needed"""
        with self._lock:
            self.max_entries = max_entries
            while len(self._cache) > max_entries:
                oldest = min(self._cache, key=lambda k: self._cache[k]['created'])
                del self._cache[oldest]

    def stats(self):
        """Get cache statistics"""
        with self._lock:
            now = datetime.now()
            valid = sum(1 for v in self._cache.values() if v['expires'] is None or now < v['expires'])
            return {
                'total_entries': len(self._cache),
                'valid_entries': valid,
                'expired_entries': len(self._cache) - valid,
                'hits': self.hits,
                'misses': self.misses
            }


# Process-local; results never depend on cache state
factorization_cache = SimpleCache(max_entries=32)
homology_cache = SimpleCache(max_entries=256)
model_cache = SimpleCache(max_entries=32)


def cached(cache_instance, ttl=None, key_func=None):
    """Decorator for caching function results

    key_func maps the call arguments to JSON-serialisable key material; by
    default the raw arguments are used.
    """
    def decorator(f):
        @wraps(f)
        def wrapper(*args, **kwargs):
            material = key_func(*args, **kwargs) if key_func else (args, kwargs)
            key = cache_instance._make_key(f.__name__, material)
            result = cache_instance.get(key)
            if result is not None:
                logger.debug(f'cache hit for {f.__name__}')
                return result
            result = f(*args, **kwargs)
            if result is not None:
                cache_instance.set(key, result, ttl)
            return result
        return wrapper
    return decorator


# ============ HELPER FUNCTIONS ============
def fingerprint(payload):
    """Stable md5 of bytes or of a JSON-serialisable value"""
    if isinstance(payload, (bytes, bytearray, memoryview)):
        return hashlib.md5(bytes(payload)).hexdigest()
    data = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.md5(data.encode()).hexdigest()


@contextmanager
def timer(label=None):
    """Measure wall time of a block; yields a dict filled with 'elapsed'"""
    record = {'elapsed': None}
    start = time.perf_counter()
    try:
        yield record
    finally:
        record['elapsed'] = round(time.perf_counter() - start, 4)
        if label:
            logger.debug(f'{label} took {record["elapsed"]}s')
