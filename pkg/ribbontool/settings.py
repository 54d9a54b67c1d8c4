"""
Django settings for ribbontool project.
"""
import os
from pathlib import Path
from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent

# .env wins; .env.example supplies the checked-in local defaults
load_dotenv(BASE_DIR / '.env')
load_dotenv(BASE_DIR / '.env.example')

SECRET_KEY = os.getenv('DJANGO_SECRET_KEY')
if not SECRET_KEY:
    raise ValueError(
        "DJANGO_SECRET_KEY environment variable is required. "
        "Generate one with: python -c \"from django.core.management.utils import get_random_secret_key; print(get_random_secret_key())\""
    )

DEBUG = os.getenv('DJANGO_DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS = os.getenv('DJANGO_ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'ribbons',
]

# Batch tool: no persistence
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Quadrature defaults
RIBBON_DEFAULT_N = int(os.getenv('RIBBON_DEFAULT_N', '256'))
RIBBON_WORKERS = int(os.getenv('RIBBON_WORKERS', '1'))
# Row block size is fixed independently of RIBBON_WORKERS so sums do not depend on the thread count
RIBBON_CHUNK_ROWS = int(os.getenv('RIBBON_CHUNK_ROWS', '16'))

# Input size limit for curve and field files (10MB max)
RIBBON_MAX_INPUT_SIZE = int(os.getenv('RIBBON_MAX_INPUT_SIZE', str(10 * 1024 * 1024)))

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {'format': '%(levelname)s %(name)s: %(message)s'},
    },
    'handlers': {
        'console': {'class': 'logging.StreamHandler', 'formatter': 'simple'},
    },
    'loggers': {
        'ribbons': {
            'handlers': ['console'],
            'level': os.getenv('RIBBON_LOG_LEVEL', 'WARNING'),
        },
    },
}
