from django.apps import AppConfig


class SkewprodConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'skewprod'
    verbose_name = 'Skew products'
