"""Persistence and export of lower-bound proof reports."""

import csv
import io
import json
from io import BytesIO

from django.db import transaction
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import ParagraphStyle, getSampleStyleSheet
from reportlab.lib.units import inch
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from .models import PrefixVerdict, ProofRun

COLUMNS = ["Prefix", "Label", "Verdict", "Iterations", "Inputs", "Seconds"]


@transaction.atomic
def record_report(report):
    """Store a LowerBoundReport as a ProofRun with one PrefixVerdict per prefix."""
    run = ProofRun.objects.create(
        channels=report.channels,
        depth=report.depth,
        mode=report.mode,
        solver=report.backend,
        verdict=report.verdict,
        summary=report.summary,
        assumptions=list(report.assumptions),
        notes=list(report.notes),
        seconds=round(report.seconds, 3),
    )
    PrefixVerdict.objects.bulk_create(
        PrefixVerdict(
            run=run,
            prefix_id=record.prefix_id,
            label=record.label,
            layers=record.layers,
            verdict=record.verdict,
            iterations=record.iterations,
            inputs=record.inputs,
            seconds=round(record.seconds, 3),
        )
        for record in report.records
    )
    return run


def _rows(run):
    return [
        [p.prefix_id, p.label, p.verdict, p.iterations, p.inputs, f"{p.seconds:.2f}"]
        for p in run.prefixes.all()
    ]


def export_json(run):
    return json.dumps(
        {
            "channels": run.channels,
            "depth": run.depth,
            "mode": run.mode,
            "solver": run.solver,
            "verdict": run.verdict,
            "summary": run.summary,
            "assumptions": run.assumptions,
            "notes": run.notes,
            "seconds": run.seconds,
            "prefixes": [
                {
                    "prefix": p.prefix_id,
                    "label": p.label,
                    "layers": p.layers,
                    "verdict": p.verdict,
                    "iterations": p.iterations,
                    "inputs": p.inputs,
                    "seconds": p.seconds,
                }
                for p in run.prefixes.all()
            ],
        },
        indent=2,
    )


def export_table(run):
    rows = [COLUMNS] + [[str(v) for v in row] for row in _rows(run)]
    widths = [max(len(row[i]) for row in rows) for i in range(len(COLUMNS))]
    lines = ["  ".join(value.ljust(width) for value, width in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * width for width in widths))
    lines.append(run.summary)
    return "\n".join(lines) + "\n"


def export_csv(run, stream=None):
    stream = stream if stream is not None else io.StringIO()
    writer = csv.writer(stream)
    writer.writerow(['Proof Run', f'{run.channels} channels', f'depth {run.depth}'])
    writer.writerow(['Verdict', run.get_verdict_display()])
    writer.writerow([])
    writer.writerow(COLUMNS)
    for row in _rows(run):
        writer.writerow(row)
    writer.writerow([])
    for assumption in run.assumptions:
        writer.writerow(['Assumption', assumption])
    for note in run.notes:
        writer.writerow(['Note', note])
    return stream


def export_pdf(run):
    buffer = BytesIO()
    doc = SimpleDocTemplate(buffer, pagesize=A4)
    elements = []

    styles = getSampleStyleSheet()
    title_style = ParagraphStyle(
        'ReportTitle',
        parent=styles['Heading1'],
        fontSize=18,
        textColor=colors.HexColor('#1e293b'),
        spaceAfter=24,
    )

    elements.append(Paragraph(f'Depth lower bound: {run.channels} channels, depth {run.depth}', title_style))
    elements.append(Paragraph(run.summary, styles['Normal']))
    elements.append(Spacer(1, 0.2 * inch))

    summary_data = [
        ['Verdict', run.get_verdict_display()],
        ['Encoding', run.mode],
        ['Solver', run.solver],
        ['Prefixes', str(run.prefix_count())],
        ['Seconds', f'{run.seconds:.2f}'],
    ]
    summary_table = Table(summary_data, colWidths=[2 * inch, 3.5 * inch])
    summary_table.setStyle(TableStyle([
        ('BACKGROUND', (0, 0), (0, -1), colors.HexColor('#f1f5f9')),
        ('ALIGN', (0, 0), (-1, -1), 'LEFT'),
        ('FONTNAME', (0, 0), (0, -1), 'Helvetica-Bold'),
        ('FONTSIZE', (0, 0), (-1, -1), 11),
        ('BOTTOMPADDING', (0, 0), (-1, -1), 8),
        ('TOPPADDING', (0, 0), (-1, -1), 8),
    ]))
    elements.append(summary_table)
    elements.append(Spacer(1, 0.3 * inch))

    rows = _rows(run)
    if rows:
        table = Table([COLUMNS] + [[str(v) for v in row] for row in rows], repeatRows=1)
        table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (-1, 0), colors.HexColor('#334155')),
            ('TEXTCOLOR', (0, 0), (-1, 0), colors.whitesmoke),
            ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
            ('FONTNAME', (0, 1), (-1, -1), 'Helvetica'),
            ('FONTSIZE', (0, 0), (-1, -1), 9),
            ('GRID', (0, 0), (-1, -1), 1, colors.grey),
            ('ROWBACKGROUNDS', (0, 1), (-1, -1), [colors.white, colors.HexColor('#f8fafc')]),
        ]))
        elements.append(table)

    for heading, items in (('Assumptions', run.assumptions), ('Notes', run.notes)):
        if items:
            elements.append(Spacer(1, 0.2 * inch))
            elements.append(Paragraph(heading, styles['Heading3']))
            for item in items:
                elements.append(Paragraph(item, styles['Normal']))

    doc.build(elements)
    data = buffer.getvalue()
    buffer.close()
    return data
