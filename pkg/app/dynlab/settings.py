"""
Django settings for the dynlab project.

The project is a desk-scale laboratory for partially hyperbolic
diffeomorphisms built over the Kummer surface. Django provides the
command line (management commands), configuration and the run archive.
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = os.environ.get('SECRET_KEY', 'changeme')

DEBUG = bool(int(os.environ.get('DEBUG', 0)))

ALLOWED_HOSTS = []
ALLOWED_HOSTS.extend(
    filter(
        None,
        os.environ.get('ALLOWED_HOSTS', '').split(',')
    )
)


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'rest_framework',
    'core',
    'dyncore',
    'kummer',
    'metric',
    'hyperbolic',
    'bundlealg',
    'skewprod',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'dynlab.urls'

WSGI_APPLICATION = 'dynlab.wsgi.application'

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


# Run archive

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('DB_NAME', str(BASE_DIR / 'db.sqlite3')),
    }
}


LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_L10N = True

USE_TZ = True

STATIC_URL = '/static/static/'
STATIC_ROOT = os.environ.get('STATIC_ROOT', str(BASE_DIR / 'static'))

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Laboratory defaults, overridable per run with command flags

DYNLAB = {
    'SEED': int(os.environ.get('DYNLAB_SEED', 20240601)),
    'OUTPUT_DIR': os.environ.get('DYNLAB_OUTPUT_DIR', 'reports'),
    'JOBS': int(os.environ.get('DYNLAB_JOBS', 1)),
    'CHUNK_SIZE': 512,
    'DOCS_DIR': os.environ.get('DYNLAB_DOCS_DIR', str(BASE_DIR.parent)),
}


LOG_LEVEL = os.environ.get('DYNLAB_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        app: {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for app in (
            'core', 'dyncore', 'kummer', 'metric',
            'hyperbolic', 'bundlealg', 'skewprod',
        )
    },
}
