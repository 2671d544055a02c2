"""
ASGI config for the primitive homology project.
"""

import os

from django.core.asgi import get_asgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'primhom_site.settings')

application = get_asgi_application()
