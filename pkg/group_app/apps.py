from django.apps import AppConfig


class GroupAppConfig(AppConfig):
    name = 'group_app'
    default_auto_field = 'django.db.models.BigAutoField'
