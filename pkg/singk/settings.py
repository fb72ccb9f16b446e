"""
Django settings for the singk project.

singk has no web surface and no database: Django provides configuration,
logging setup and the management-command CLI (`python manage.py singk ...`).

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.0/ref/settings/
"""

import os
from pathlib import Path


def _env_flag(name, default):
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Management commands still need a key even though nothing is signed.
SECRET_KEY = os.getenv('SINGK_SECRET_KEY', 'singk-insecure-local-only')

DEBUG = _env_flag('SINGK_DEBUG', False)

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'singularity.apps.SingularityConfig',
]

DATABASES = {}

USE_TZ = True
TIME_ZONE = 'UTC'

# Computation settings
# Upper bound on the number of elements enumerated by close_group
SINGK_MAX_ORDER = int(os.getenv('SINGK_MAX_ORDER', 100000))
# Groups up to this order get a dense multiplication table
SINGK_DENSE_TABLE_LIMIT = int(os.getenv('SINGK_DENSE_TABLE_LIMIT', 4096))
# Koszul class over the dual representation (false: over the representation itself)
SINGK_KOSZUL_USE_DUAL = _env_flag('SINGK_KOSZUL_USE_DUAL', True)
# Seed for the randomized parts of selftest
SINGK_SELFTEST_SEED = int(os.getenv('SINGK_SELFTEST_SEED', 20240501))
# Fan batch validation out to Celery workers instead of computing inline
SINGK_USE_WORKERS = _env_flag('SINGK_USE_WORKERS', False)

# Celery (only used when SINGK_USE_WORKERS is on; eager otherwise)
CELERY_BROKER_URL = os.getenv('SINGK_CELERY_BROKER', 'redis://127.0.0.1:6379/0')
CELERY_RESULT_BACKEND = os.getenv('SINGK_CELERY_BACKEND', 'redis://127.0.0.1:6379/0')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TASK_SERIALIZER = 'json'
CELERY_TIMEZONE = 'UTC'
CELERY_TASK_ALWAYS_EAGER = _env_flag('SINGK_CELERY_EAGER', True)
CELERY_TASK_EAGER_PROPAGATES = True

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'singularity': {
            'handlers': ['console'],
            'level': os.getenv('SINGK_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}
