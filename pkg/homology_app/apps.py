from django.apps import AppConfig


class HomologyAppConfig(AppConfig):
    name = 'homology_app'
    verbose_name = 'Primitive homology'
