import os
from decouple import config
import dj_database_url


# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', cast=str, default="phl-local-#4v0k!r8m2s6q9t1w3y5z7b0d2f4h6j8")

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', cast=bool, default=False)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', cast=str, default='localhost,127.0.0.1').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'drf_yasg',
    'group_app',
    'homology_app',
]

REST_FRAMEWORK = {
    'DEFAULT_PERMISSION_CLASSES': (
        'rest_framework.permissions.AllowAny',
    ),
    'DEFAULT_AUTHENTICATION_CLASSES': (),
    'UNAUTHENTICATED_USER': None,
}

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'primhom_site.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'primhom_site.wsgi.application'


# Database
# The only table is the character-table cache. PostgreSQL if DATABASE_URL is provided, otherwise SQLite.

DATABASE_URL = config('DATABASE_URL', default='')

if DATABASE_URL:
    DATABASES = {
        'default': dj_database_url.parse(
            DATABASE_URL,
            conn_max_age=600,
            conn_health_checks=True,
        )
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': os.path.join(BASE_DIR, 'db.sqlite3'),
        }
    }


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

STATIC_URL = '/static/'
STATIC_ROOT = os.path.join(BASE_DIR, 'staticfiles')

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Computation limits
# Every limit can be overridden from the environment or a .env file.

PHL_STATE_BUDGET = config('PHL_STATE_BUDGET', cast=int, default=10 ** 8)
PHL_GROUP_ORDER_CAP = config('PHL_GROUP_ORDER_CAP', cast=int, default=5000)
PHL_CLOSURE_BOUND = config('PHL_CLOSURE_BOUND', cast=int, default=10 ** 6)
PHL_ASSOCIATIVITY_EXHAUSTIVE_MAX = config('PHL_ASSOCIATIVITY_EXHAUSTIVE_MAX', cast=int, default=200)
PHL_ASSOCIATIVITY_SAMPLES = config('PHL_ASSOCIATIVITY_SAMPLES', cast=int, default=10 ** 5)
PHL_WORD_BUDGET = config('PHL_WORD_BUDGET', cast=int, default=12)
PHL_PRIME_SEARCH_LIMIT = config('PHL_PRIME_SEARCH_LIMIT', cast=int, default=10 ** 7)
PHL_CATALOG_JOBS = config('PHL_CATALOG_JOBS', cast=int, default=1)
PHL_FLOAT_SHADOW = config('PHL_FLOAT_SHADOW', cast=bool, default=False)


# Logging

PHL_LOG_LEVEL = config('PHL_LOG_LEVEL', cast=str, default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'group_app': {
            'handlers': ['console'],
            'level': PHL_LOG_LEVEL,
        },
        'homology_app': {
            'handlers': ['console'],
            'level': PHL_LOG_LEVEL,
        },
    },
}
