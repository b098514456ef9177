from django.apps import AppConfig


class LiegroupConfig(AppConfig):
    name = 'liegroup'
