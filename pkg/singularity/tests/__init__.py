import os
import django

# Configure Django once for every test module in this package.
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'singk.settings')
django.setup()
