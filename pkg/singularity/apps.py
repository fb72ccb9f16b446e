from django.apps import AppConfig

class SingularityConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'singularity'
    verbose_name = 'Singularity K-theory of quotient singularities'
