from django.apps import AppConfig


class KummerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'kummer'
    verbose_name = 'Kummer surface atlas'
