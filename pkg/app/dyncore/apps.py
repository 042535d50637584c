from django.apps import AppConfig


class DyncoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'dyncore'
    verbose_name = 'Perturbed torus automorphisms'
