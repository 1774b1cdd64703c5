from django.urls import path
from . import views

app_name = 'catalog'

urlpatterns = [
    path('', views.CatalogListView.as_view(), name='entry_list'),
    path('<slug:entry_id>/', views.CatalogDetailView.as_view(), name='entry_detail'),
    path('<slug:entry_id>/json/', views.CatalogJsonView.as_view(), name='entry_json'),
]
