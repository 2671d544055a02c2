"""
WSGI config for the primitive homology project.

Serves the read-only report API; the command-line surface is ``manage.py phl``.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'primhom_site.settings')

application = get_wsgi_application()
