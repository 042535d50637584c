"""dynlab URL Configuration

Only the admin is exposed; it browses the archive of recorded runs.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
