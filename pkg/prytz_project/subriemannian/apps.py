from django.apps import AppConfig


class SubriemannianConfig(AppConfig):
    name = 'subriemannian'
