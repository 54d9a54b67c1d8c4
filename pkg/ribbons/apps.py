from django.apps import AppConfig


class RibbonsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ribbons'
    verbose_name = 'Ribbons, linking and helicity'
