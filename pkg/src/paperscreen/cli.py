"""Command-line entry point wiring the pipeline together.

Exit codes: 0 success, 1 partial (some input lines were rejected),
2 fatal.  Every output file embeds the effective configuration, so a run
is reproducible from its artifacts alone.  SCREENER_DATA_DIR overrides
the default location of dictionaries and registries (which ship with the
package).
"""

from __future__ import annotations

import csv
import json
import os
import sys
from pathlib import Path

import click

from paperscreen import editorial, fingerprints, generated, mining, sequences
from paperscreen.assessment import AssessmentService, CorruptLogError, replay as replay_log
from paperscreen.corpus import load_corpus

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_FATAL = 2


def data_dir() -> Path:
    override = os.environ.get("SCREENER_DATA_DIR")
    if override:
        return Path(override)
    return Path(__file__).parent / "data"


def _fatal(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_FATAL)


def _load_corpus_or_die(path: str):
    if not os.path.exists(path):
        _fatal(f"corpus file not found: {path}")
    corpus, errors = load_corpus(path)
    for err in errors:
        click.echo(f"warning: line {err.line_no}: {err.reason}", err=True)
    return corpus, errors


def _config_line(params: dict) -> str:
    return json.dumps({"_config": dict(sorted(params.items()))}, sort_keys=True)


@click.group()
def main():
    """Screen the literature for problematic papers."""


@main.command()
@click.option("--corpus", "corpus_path", required=True, help="JSONL corpus file.")
@click.option("--dict", "dict_path", default=None, help="Fingerprint TSV (default: bundled seed list).")
@click.option("--out", "out_path", required=True, help="Output JSONL, one report per line.")
@click.option("--flagged-at", default=1, show_default=True, help="Distinct fingerprints for 'flagged'.")
@click.option("--queued-at", default=3, show_default=True, help="Distinct fingerprints for 'queued'.")
@click.option("--workers", default=1, show_default=True, help="Scan worker threads.")
def screen(corpus_path, dict_path, out_path, flagged_at, queued_at, workers):
    """Scan a corpus for tortured-phrase fingerprints."""
    dict_path = dict_path or str(data_dir() / "fingerprints_seed.tsv")
    if not os.path.exists(dict_path):
        _fatal(f"dictionary file not found: {dict_path}")
    corpus, errors = _load_corpus_or_die(corpus_path)
    try:
        compiled = fingerprints.compile_dictionary(fingerprints.load_dictionary(dict_path))
    except fingerprints.DictionaryError as exc:
        _fatal(str(exc))
    policy = fingerprints.SeverityPolicy(flagged_at=flagged_at, queued_at=queued_at)
    reports = fingerprints.scan_corpus(corpus, compiled, policy, workers=workers)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(_config_line({"dict": dict_path, "flagged_at": flagged_at, "queued_at": queued_at}) + "\n")
        for report in reports:
            fh.write(report.to_json() + "\n")
    click.echo(f"screened {len(corpus)} records, {sum(1 for r in reports if r.severity != 'clean')} flagged")
    sys.exit(EXIT_PARTIAL if errors else EXIT_OK)


@main.command("detect-generated")
@click.option("--corpus", "corpus_path", required=True)
@click.option("--signatures", "sig_path", default=None, help="Signature TSV (default: bundled toy grammar).")
@click.option("--scores", "scores_path", default=None, help="External classifier score CSV.")
@click.option("--score-threshold", default=0.5, show_default=True)
@click.option("--out", "out_path", required=True)
def detect_generated(corpus_path, sig_path, scores_path, score_threshold, out_path):
    """Flag grammar-generated papers; summarize external classifier scores."""
    sig_path = sig_path or str(data_dir() / "signatures_toy.tsv")
    if not os.path.exists(sig_path):
        _fatal(f"signature file not found: {sig_path}")
    corpus, errors = _load_corpus_or_die(corpus_path)
    try:
        signatures = generated.load_signatures(sig_path)
    except generated.SignatureError as exc:
        _fatal(str(exc))
    verdicts = generated.detect_corpus(corpus, signatures)
    summary = None
    if scores_path:
        if not os.path.exists(scores_path):
            _fatal(f"score file not found: {scores_path}")
        try:
            scores, skipped = generated.import_scores(scores_path, known_ids=set(corpus.index))
        except generated.ScoreError as exc:
            _fatal(str(exc))
        for pid in skipped:
            click.echo(f"warning: score for unknown paper {pid!r} skipped", err=True)
        fraction, empty = generated.concentration(scores, score_threshold)
        summary = {"threshold": score_threshold, "concentration": fraction, "empty_input": empty,
                   "scored": len(scores), "skipped": len(skipped)}
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(_config_line({"signatures": sig_path, "score_threshold": score_threshold}) + "\n")
        for v in verdicts:
            fh.write(json.dumps(v.to_dict(), ensure_ascii=False, sort_keys=True) + "\n")
        if summary is not None:
            fh.write(json.dumps({"_score_summary": summary}, sort_keys=True) + "\n")
    positives = sum(1 for v in verdicts if v.verdict == "positive")
    click.echo(f"{positives} of {len(corpus)} papers look grammar-generated")
    sys.exit(EXIT_PARTIAL if errors else EXIT_OK)


@main.command()
@click.option("--corpus", "corpus_path", required=True)
@click.option("--n", default=2, show_default=True, type=click.IntRange(2, 3))
@click.option("--min-count", default=mining.DEFAULT_MIN_COUNT, show_default=True)
@click.option("--npmi-floor", default=mining.DEFAULT_NPMI_FLOOR, show_default=True)
@click.option("--contrast-ceiling", default=mining.DEFAULT_CONTRAST_CEILING, show_default=True)
@click.option("--smoothing", default=mining.DEFAULT_SMOOTHING, show_default=True)
@click.option("--out", "out_path", required=True)
def mine(corpus_path, n, min_count, npmi_floor, contrast_ceiling, smoothing, out_path):
    """Mine candidate tortured phrases by NPMI with field contrast."""
    corpus, errors = _load_corpus_or_die(corpus_path)
    candidates = mining.mine_candidates(
        corpus, n, min_count=min_count, npmi_floor=npmi_floor,
        contrast_ceiling=contrast_ceiling, smoothing=smoothing,
    )
    mining.write_candidates(
        candidates, out_path,
        {"n": n, "min_count": min_count, "npmi_floor": npmi_floor,
         "contrast_ceiling": contrast_ceiling, "smoothing": smoothing},
    )
    click.echo(f"{len(candidates)} candidates, "
               f"{sum(1 for c in candidates if c.verdict_hint == mining.VERDICT_SUSPECT)} suspect")
    sys.exit(EXIT_PARTIAL if errors else EXIT_OK)


@main.command("check-sequences")
@click.option("--corpus", "corpus_path", required=True)
@click.option("--reference", "ref_path", default=None, help="FASTA reference (default: bundled toy set).")
@click.option("--suppliers", "suppliers_path", default=None)
@click.option("--cell-lines", "cell_lines_path", default=None)
@click.option("--k", default=sequences.KMER_SIZE, show_default=True)
@click.option("--out", "out_path", required=True)
def check_sequences(corpus_path, ref_path, suppliers_path, cell_lines_path, k, out_path):
    """Verify nucleotide claims and flag untraceable suppliers."""
    ref_path = ref_path or str(data_dir() / "reference_toy.fa")
    suppliers_path = suppliers_path or str(data_dir() / "suppliers.txt")
    cell_lines_path = cell_lines_path or str(data_dir() / "cell_lines_flagged.txt")
    for path in (ref_path, suppliers_path, cell_lines_path):
        if not os.path.exists(path):
            _fatal(f"input file not found: {path}")
    corpus, errors = _load_corpus_or_die(corpus_path)
    try:
        ref = sequences.build_reference(ref_path, k=k)
    except sequences.ReferenceError as exc:
        _fatal(str(exc))
    registry = sequences.load_registry(suppliers_path)
    flagged_lines = sequences.load_registry(cell_lines_path)
    vocabulary = ref.gene_symbols()
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(_config_line({"reference": ref_path, "k": k, "min_length": sequences.MIN_SEQUENCE_LENGTH}) + "\n")
        for doc in corpus:
            extraction = sequences.extract_claims(doc, vocabulary)
            for claim in extraction.claims:
                fh.write(sequences.verify(claim, ref).to_json() + "\n")
            for note in extraction.notes:
                fh.write(json.dumps({"paper_id": doc.id, "note": note}, ensure_ascii=False) + "\n")
            for check in sequences.check_supplier(doc, registry):
                if not check.known:
                    fh.write(json.dumps(
                        {"paper_id": doc.id, "supplier": check.supplier_name, "known": False},
                        ensure_ascii=False, sort_keys=True) + "\n")
            for check in sequences.check_cell_lines(doc, flagged_lines):
                fh.write(json.dumps(
                    {"paper_id": doc.id, "cell_line": check.cell_line, "misidentified": True},
                    ensure_ascii=False, sort_keys=True) + "\n")
    click.echo(f"sequence check written to {out_path}")
    sys.exit(EXIT_PARTIAL if errors else EXIT_OK)


@main.command()
@click.option("--corpus", "corpus_path", required=True)
@click.option("--journal", required=True)
@click.option("--min-segment", default=editorial.DEFAULT_MIN_SEGMENT, show_default=True)
@click.option("--alpha", default=editorial.DEFAULT_ALPHA, show_default=True)
@click.option("--ratio-ceiling", default=editorial.DEFAULT_RATIO_CEILING, show_default=True)
@click.option("--out", "out_path", required=True, help="Changepoint CSV.")
@click.option("--monthly-out", default=None, help="Optional monthly summary CSV.")
def timeline(corpus_path, journal, min_segment, alpha, ratio_ceiling, out_path, monthly_out):
    """Detect editorial-duration shrinkage for one journal."""
    corpus, errors = _load_corpus_or_die(corpus_path)
    series = editorial.build_series(corpus, journal)
    scan = editorial.detect_changepoints(series, min_segment=min_segment, alpha=alpha, ratio_ceiling=ratio_ceiling)
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# {_config_line({'journal': journal, 'min_segment': min_segment, 'alpha': alpha, 'ratio_ceiling': ratio_ceiling})}\n")
        fh.write(f"# status: {scan.status}; points: {len(series)}; excluded: {series.excluded}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["journal", "index", "date", "median_before", "median_after", "shrinkage_ratio", "p_value"])
        for cp in scan.changepoints:
            writer.writerow([journal, cp.index, cp.date.isoformat(), cp.median_before,
                             cp.median_after, f"{cp.shrinkage_ratio:.6f}", f"{cp.significance:.3e}"])
    if monthly_out:
        with open(monthly_out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["month", "count", "median_days"])
            for month, count, median in editorial.monthly_summary(series):
                writer.writerow([month, count, median])
    if scan.status != editorial.STATUS_OK:
        click.echo(f"{journal}: {scan.status}")
    else:
        click.echo(f"{journal}: {len(scan.changepoints)} shrinkage changepoint(s)")
    sys.exit(EXIT_PARTIAL if errors else EXIT_OK)


@main.group()
def queue():
    """Assessment queue operations."""


@queue.command()
@click.option("--log", "log_path", required=True, help="Append-only event log file.")
@click.option("--dict", "dict_path", default=None, help="Base fingerprint dictionary TSV.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True)
def serve(log_path, dict_path, host, port):
    """Run the assessment HTTP service."""
    import uvicorn

    from paperscreen.assessment.api import create_app

    dict_path = dict_path or str(data_dir() / "fingerprints_seed.tsv")
    if not os.path.exists(dict_path):
        _fatal(f"dictionary file not found: {dict_path}")
    service = AssessmentService(fingerprints.load_dictionary(dict_path), log_path=log_path)
    uvicorn.run(create_app(service), host=host, port=port, log_level="warning")


@queue.command()
@click.option("--log", "log_path", required=True)
@click.option("--publisher", default=None)
@click.option("--journal", default=None)
@click.option("--out", "out_path", required=True, help="Notification bundle JSON.")
def export(log_path, publisher, journal, out_path):
    """Export COPE-style publisher notifications for confirmed entries."""
    if not os.path.exists(log_path):
        _fatal(f"log file not found: {log_path}")
    try:
        service = AssessmentService([], log_path=log_path)
        bundle = service.export_notifications(publisher=publisher, journal=journal)
        service.close()
    except CorruptLogError as exc:
        _fatal(f"corrupt log: {exc}")
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(bundle, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")
    click.echo(f"{bundle['total']} notification(s) across {len(bundle['publishers'])} publisher(s)")


@main.command("replay")
@click.option("--log", "log_path", required=True)
@click.option("--out", "out_path", default=None, help="Optional state dump JSON.")
def replay_cmd(log_path, out_path):
    """Rebuild and summarize service state from an event log."""
    if not os.path.exists(log_path):
        _fatal(f"log file not found: {log_path}")
    try:
        state = replay_log(log_path)
    except CorruptLogError as exc:
        _fatal(f"corrupt log: {exc}")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(state.to_dict(), fh, ensure_ascii=False, sort_keys=True, indent=2)
            fh.write("\n")
    click.echo(
        f"{state.last_event_id} events, {len(state.entries)} queue entries, "
        f"{len(state.proposals)} proposals, {len(state.promoted)} promoted fingerprints"
    )


if __name__ == "__main__":
    main()
