from django.http import HttpResponse
from django.views.generic import DetailView, ListView

from .exporters import export_csv, export_pdf
from .models import ProofRun


class ProofRunListView(ListView):
    """Stored lower-bound sweeps, newest first"""
    model = ProofRun
    template_name = 'reports/run_list.html'
    context_object_name = 'runs'
    paginate_by = 20


class ProofRunDetailView(DetailView):
    model = ProofRun
    template_name = 'reports/run_detail.html'
    context_object_name = 'run'

    def get_context_data(self, **kwargs):
        context = super().get_context_data(**kwargs)
        context['prefixes'] = self.object.prefixes.all()
        return context


class ProofRunCSVView(DetailView):
    """Export a proof run as CSV"""
    model = ProofRun

    def get(self, request, *args, **kwargs):
        run = self.get_object()
        response = HttpResponse(content_type='text/csv')
        response['Content-Disposition'] = f'attachment; filename="proof_run_{run.pk}_n{run.channels}_d{run.depth}.csv"'
        export_csv(run, response)
        return response


class ProofRunPDFView(DetailView):
    """Export a proof run as PDF"""
    model = ProofRun

    def get(self, request, *args, **kwargs):
        run = self.get_object()
        response = HttpResponse(content_type='application/pdf')
        response['Content-Disposition'] = f'attachment; filename="proof_run_{run.pk}_n{run.channels}_d{run.depth}.pdf"'
        response.write(export_pdf(run))
        return response
