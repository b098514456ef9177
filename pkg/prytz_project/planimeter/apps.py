from django.apps import AppConfig


class PlanimeterConfig(AppConfig):
    name = 'planimeter'
