import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "prytz_project.settings")
django.setup()
