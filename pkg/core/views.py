from django.views.generic import TemplateView

from catalog.library import default_catalog
from reports.models import ProofRun


class HomeView(TemplateView):
    """Landing page: catalog summary and the latest proof runs."""
    template_name = "home.html"

    def get_context_data(self, **kwargs):
        context = super().get_context_data(**kwargs)
        catalog = default_catalog()
        context['sorting_entries'] = catalog.entries('sorting')
        context['prefix_entries'] = catalog.entries('prefix')
        context['recent_runs'] = ProofRun.objects.all()[:5]
        return context
