# geometry/cache.py
import hashlib
import json

from django.conf import settings
from django.core.cache import cache

from geometry.moments import Moments, moments


def build_cache_key(prefix, **kwargs):
    """
    Constructs a consistent cache key from prefix and parameters.
    Values are JSON-encoded and hashed so keys stay short and free of spaces.
    Example: build_cache_key('moments', spec={...}, samples=4096)
    """
    payload = json.dumps(kwargs, sort_keys=True, separators=(",", ":"))
    return f"{prefix}:" + hashlib.sha1(payload.encode("utf-8")).hexdigest()


def get_or_set_cache(key, compute_fn, timeout=None):
    """Value under `key`, computed by compute_fn() and stored on a miss."""
    if timeout is None:
        timeout = settings.PRYTZ_CACHE_TIMEOUT
    data = cache.get(key)
    if data is None:
        data = compute_fn()
        cache.set(key, data, timeout=timeout)
    return data


def cached_moments(curve, samples):
    """
    moments() of a curve, shared between runs on the same curve spec.

    With the locmem backend from settings.CACHES the entry lives for the
    process, so repeated commands in one run sample each curve once.
    """
    key = build_cache_key("moments", spec=curve.to_spec(), samples=samples)
    stored = get_or_set_cache(key, lambda: moments(curve, samples).as_dict())
    return Moments(**stored)
