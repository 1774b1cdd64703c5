from django.urls import path
from . import views

app_name = 'reports'

urlpatterns = [
    path('', views.ProofRunListView.as_view(), name='run_list'),
    path('<int:pk>/', views.ProofRunDetailView.as_view(), name='run_detail'),
    path('<int:pk>/csv/', views.ProofRunCSVView.as_view(), name='run_csv'),
    path('<int:pk>/pdf/', views.ProofRunPDFView.as_view(), name='run_pdf'),
]
