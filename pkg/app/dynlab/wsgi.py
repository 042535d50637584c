"""
WSGI config for the dynlab project.

Serves the admin over the archive of recorded runs.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'dynlab.settings')

application = get_wsgi_application()
