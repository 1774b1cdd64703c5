from django.http import Http404, JsonResponse
from django.utils.safestring import mark_safe
from django.views import View
from django.views.generic import TemplateView

from core.exceptions import CatalogError
from networks.rendering import render_svg
from networks.serialization import network_to_dict

from .library import EDITIONS, default_catalog


def get_entry_or_404(entry_id):
    try:
        return default_catalog().get(entry_id)
    except CatalogError:
        raise Http404(f"No catalog entry {entry_id!r}")


class CatalogListView(TemplateView):
    """Catalog entries grouped by kind, with the depth bounds table"""
    template_name = "catalog/entry_list.html"

    def get_context_data(self, **kwargs):
        context = super().get_context_data(**kwargs)
        catalog = default_catalog()
        table = catalog.bounds_table
        context['entries'] = catalog.entries()
        context['bounds'] = [
            {
                'channels': n,
                'editions': [table.bounds(n, edition) for edition in EDITIONS],
            }
            for n in table.channels
        ]
        context['editions'] = EDITIONS
        return context


class CatalogDetailView(TemplateView):
    template_name = "catalog/entry_detail.html"

    def get_context_data(self, **kwargs):
        context = super().get_context_data(**kwargs)
        entry = get_entry_or_404(self.kwargs['entry_id'])
        context['entry'] = entry
        context['layers'] = network_to_dict(entry.network)['layers']
        context['diagram'] = mark_safe(render_svg(entry.network, entry.id))
        return context


class CatalogJsonView(View):
    """Download a catalog network as JSON"""

    def get(self, request, entry_id):
        entry = get_entry_or_404(entry_id)
        response = JsonResponse(network_to_dict(entry.network))
        response['Content-Disposition'] = f'attachment; filename="{entry.id}.json"'
        return response
