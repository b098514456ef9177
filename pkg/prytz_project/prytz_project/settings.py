"""
Django settings for prytz_project project.

The project has no web surface: Django provides the management command
framework, configuration, caching and the test runner for the simulator apps.

For more information on this file, see
https://docs.djangoproject.com/en/4.2/topics/settings/
"""

from pathlib import Path
from dotenv import load_dotenv
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# 1. Figure out where your .env lives (next to manage.py)
# 2. Load it! Values already present in os.environ win.
load_dotenv(BASE_DIR / ".env")

# 3. Now you can safely pull them out
SECRET_KEY = os.getenv("DJANGO_SECRET_KEY", "prytz-local-only")

DEBUG = os.getenv("DJANGO_DEBUG", "0") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'core',
    'geometry',
    'planimeter',
    'liegroup',
    'subriemannian',
    'development',
    'simulator',
]

# No models anywhere: every computation is pure and nothing is persisted.
DATABASES = {}

CACHES = {
    "default": {
        "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
        "LOCATION": "prytz-moments",
    }
}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# ----------------------------
# Simulator defaults
# ----------------------------

# Fixed step count for lifts, holonomy and geodesics (PRYTZ_STEPS overrides)
PRYTZ_STEPS = int(os.getenv("PRYTZ_STEPS", "100000"))

# Boundary quadrature nodes per primitive
PRYTZ_SAMPLES = int(os.getenv("PRYTZ_SAMPLES", "4096"))

PRYTZ_CACHE_TIMEOUT = int(os.getenv("PRYTZ_CACHE_TIMEOUT", "300"))  # 5 minutes

PRYTZ_LOG_LEVEL = os.getenv("PRYTZ_LOG_LEVEL", "INFO").upper()


# ----------------------------
# Logging
# ----------------------------

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "plain",
        },
    },
    "loggers": {
        app: {"handlers": ["console"], "level": PRYTZ_LOG_LEVEL, "propagate": False}
        for app in (
            "core",
            "geometry",
            "planimeter",
            "liegroup",
            "subriemannian",
            "development",
            "simulator",
        )
    },
}

REST_FRAMEWORK = {
    # Scenario documents are plain JSON numbers; keep floats as floats.
    'COERCE_DECIMAL_TO_STRING': False,
}
