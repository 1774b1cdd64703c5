import json

from django.contrib.auth import get_user_model
from django.test import TestCase
from django.urls import reverse

from synthesis.lower_bounds import NONE_EXTENDS, LowerBoundReport, PrefixRecord

from .exporters import COLUMNS, export_csv, export_json, export_pdf, export_table, record_report
from .models import PrefixVerdict, ProofRun

BZ4 = {"channels": 4, "layers": [[[1, 4], [2, 3]]]}


def make_report(verdicts=("no-network", "no-network")):
    records = [
        PrefixRecord(f"prefix{i}", "enumerated", BZ4, verdict, 3 + i, 7 + i, 0.25 * (i + 1))
        for i, verdict in enumerate(verdicts)
    ]
    return LowerBoundReport(6, 4, "improved", "internal", records, seconds=1.23456)


class RecordReportTests(TestCase):
    def test_run_and_verdicts_are_stored(self):
        run = record_report(make_report())
        self.assertEqual(run.verdict, NONE_EXTENDS)
        self.assertEqual(run.seconds, 1.235)
        self.assertEqual(run.prefix_count(), 2)
        self.assertEqual(PrefixVerdict.objects.filter(run=run, verdict="no-network").count(), 2)
        self.assertEqual(run.prefixes.first().layers, BZ4)
        self.assertIn("covers every sorting network", run.assumptions[0])

    def test_mixed_verdicts(self):
        run = record_report(make_report(("no-network", "unknown")))
        self.assertEqual(run.verdict, ProofRun.Verdict.INCONCLUSIVE)
        self.assertEqual(run.get_verdict_display(), "Inconclusive")

    def test_str(self):
        run = record_report(make_report())
        self.assertEqual(str(run), "6 channels, depth 4: No network extends any prefix")


class ExportTests(TestCase):
    def setUp(self):
        self.run = record_report(make_report())

    def test_json(self):
        data = json.loads(export_json(self.run))
        self.assertEqual(data["verdict"], NONE_EXTENDS)
        self.assertEqual([p["prefix"] for p in data["prefixes"]], ["prefix0", "prefix1"])

    def test_table(self):
        table = export_table(self.run)
        lines = table.splitlines()
        self.assertTrue(lines[0].startswith("Prefix"))
        self.assertTrue(set(lines[1]) <= {"-", " "})
        self.assertEqual(lines[-1], self.run.summary)

    def test_csv(self):
        text = export_csv(self.run).getvalue()
        self.assertIn(",".join(COLUMNS), text)
        self.assertIn("prefix1,enumerated,no-network,4,8,0.50", text)
        self.assertIn("Note,", text)

    def test_pdf(self):
        self.assertTrue(export_pdf(self.run).startswith(b"%PDF"))


class ReportViewTests(TestCase):
    def setUp(self):
        self.run = record_report(make_report())

    def test_list(self):
        response = self.client.get(reverse("reports:run_list"))
        self.assertEqual(response.status_code, 200)
        self.assertEqual(list(response.context["runs"]), [self.run])

    def test_detail(self):
        response = self.client.get(reverse("reports:run_detail", args=[self.run.pk]))
        self.assertEqual(response.status_code, 200)
        self.assertContains(response, "prefix0")
        self.assertEqual(len(response.context["prefixes"]), 2)

    def test_csv_download(self):
        response = self.client.get(reverse("reports:run_csv", args=[self.run.pk]))
        self.assertEqual(response["Content-Type"], "text/csv")
        self.assertIn(f"proof_run_{self.run.pk}_n6_d4.csv", response["Content-Disposition"])
        self.assertIn(b"prefix0", response.content)

    def test_pdf_download(self):
        response = self.client.get(reverse("reports:run_pdf", args=[self.run.pk]))
        self.assertEqual(response["Content-Type"], "application/pdf")
        self.assertTrue(response.content.startswith(b"%PDF"))

    def test_missing_run(self):
        response = self.client.get(reverse("reports:run_detail", args=[self.run.pk + 100]))
        self.assertEqual(response.status_code, 404)

    def test_admin_changelist(self):
        user = get_user_model().objects.create_superuser("admin", "admin@example.com", "password")
        self.client.force_login(user)
        response = self.client.get(reverse("admin:reports_proofrun_changelist"))
        self.assertEqual(response.status_code, 200)
        response = self.client.get(reverse("admin:reports_proofrun_change", args=[self.run.pk]))
        self.assertEqual(response.status_code, 200)
