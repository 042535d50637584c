from django.apps import AppConfig


class BundlealgConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'bundlealg'
    verbose_name = 'Torus bundle algebra'
