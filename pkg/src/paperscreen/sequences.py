"""Nucleotide claim extraction and verification against a local reference.

Papers state that a reagent sequence either targets a named gene or
targets none; either claim is checkable by exact substring search over a
reference gene set, on both strands.  The reference here is a local
FASTA-style oracle behind a k-mer index; a real alignment service can
replace `verify` without touching extraction (the boundary is
claim -> verdict).

Supplier names and cell-line identifiers are checked against plain name
registries: unknown suppliers and known-misidentified lines get flagged.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from paperscreen.corpus import BibRecord

KMER_SIZE = 12
MIN_SEQUENCE_LENGTH = 12
CONTEXT_WINDOW = 120

CLAIM_TARGETS = "targets_gene"
CLAIM_NON_TARGETING = "non_targeting"

VERDICT_SUPPORTED = "supported"
VERDICT_CONTRADICTED = "contradicted"
VERDICT_UNVERIFIABLE = "unverifiable"

MATCH_FORWARD = "forward"
MATCH_REVERSE_COMPLEMENT = "reverse_complement"
MATCH_NONE = "none"

_COMPLEMENT = str.maketrans("ACGT", "TGCA")

# maximal case-insensitive runs over the nucleotide alphabet, not embedded
# in a longer word
_SEQUENCE_RE = re.compile(r"(?<![A-Za-z])[ACGTUacgtu]{%d,}(?![A-Za-z])" % MIN_SEQUENCE_LENGTH)

_NON_TARGETING_CUES = ("non-targeting", "nontargeting", "scramble", "negative control", "targets none")

_SUPPLIER_PATTERNS = (
    re.compile(r"purchased from ([A-Z][A-Za-z0-9&'.-]*(?: [A-Z][A-Za-z0-9&'.-]*)*)"),
    re.compile(r"\(([A-Z][A-Za-z0-9&'.-]*(?: [A-Z][A-Za-z0-9&'.-]*)*),\s"),
)


class ReferenceError(ValueError):
    pass


def clean_sequence(raw: str) -> str:
    """Uppercase and map U to T so RNA and DNA notations compare equal."""
    return raw.upper().replace("U", "T")


def reverse_complement(seq: str) -> str:
    return seq.translate(_COMPLEMENT)[::-1]


@dataclass(frozen=True)
class NucleotideClaim:
    paper_id: str
    sequence: str  # cleaned: uppercase, U mapped to T
    claim: str  # CLAIM_TARGETS | CLAIM_NON_TARGETING
    gene_symbol: str | None
    context_snippet: str
    offset: int


@dataclass(frozen=True)
class ClaimVerdict:
    claim: NucleotideClaim
    verdict: str
    matched_gene: str | None
    match_kind: str

    def to_dict(self) -> dict:
        return {
            "paper_id": self.claim.paper_id,
            "sequence": self.claim.sequence,
            "claim": self.claim.claim,
            "gene_symbol": self.claim.gene_symbol,
            "verdict": self.verdict,
            "matched_gene": self.matched_gene,
            "match_kind": self.match_kind,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)


@dataclass(frozen=True)
class SupplierCheck:
    paper_id: str
    supplier_name: str
    known: bool


@dataclass(frozen=True)
class CellLineCheck:
    paper_id: str
    cell_line: str
    misidentified: bool


@dataclass
class ExtractionResult:
    claims: list[NucleotideClaim]
    notes: list[str]


class ReferenceIndex:
    """k-mer index over reference genes, both strands."""

    def __init__(self, genes: dict[str, str], k: int = KMER_SIZE):
        self.k = k
        self.genes: dict[str, str] = {}
        self.kmers: dict[str, set[tuple[str, int]]] = {}
        for symbol, seq in genes.items():
            seq = seq.upper()
            if not symbol:
                raise ReferenceError("empty gene symbol")
            if re.search(r"[^ACGT]", seq):
                raise ReferenceError(f"gene {symbol!r}: non-nucleotide character")
            self.genes[symbol] = seq
            for strand_seq in (seq, reverse_complement(seq)):
                for i in range(len(strand_seq) - k + 1):
                    self.kmers.setdefault(strand_seq[i : i + k], set()).add((symbol, i))

    def gene_symbols(self) -> list[str]:
        return sorted(self.genes)

    def genes_containing(self, sequence: str) -> dict[str, str]:
        """Genes containing the sequence; value is forward or reverse_complement.

        Forward wins when a gene matches on both strands.  Candidate genes
        come from the k-mer index; each candidate is confirmed by a full
        substring check.
        """
        sequence = clean_sequence(sequence)
        if len(sequence) < self.k:
            raise ValueError(f"sequence shorter than k={self.k}")
        candidates = {g for g, _ in self.kmers.get(sequence[: self.k], set())}
        rc = reverse_complement(sequence)
        candidates |= {g for g, _ in self.kmers.get(rc[: self.k], set())}
        found: dict[str, str] = {}
        for gene in sorted(candidates):
            ref = self.genes[gene]
            if sequence in ref:
                found[gene] = MATCH_FORWARD
            elif rc in ref:
                found[gene] = MATCH_REVERSE_COMPLEMENT
        return found


def parse_fasta(path) -> dict[str, str]:
    """Read a '>symbol' / sequence-lines reference file."""
    genes: dict[str, str] = {}
    symbol: str | None = None
    chunks: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith(">"):
                if symbol is not None:
                    genes[symbol] = "".join(chunks)
                symbol = line[1:].split()[0] if len(line) > 1 else ""
                if not symbol:
                    raise ReferenceError("header line without a symbol")
                if symbol in genes:
                    raise ReferenceError(f"duplicate gene symbol {symbol!r}")
                chunks = []
            else:
                if symbol is None:
                    raise ReferenceError("sequence line before any header")
                chunks.append(line.upper())
    if symbol is not None:
        genes[symbol] = "".join(chunks)
    return genes


def build_reference(path, k: int = KMER_SIZE) -> ReferenceIndex:
    return ReferenceIndex(parse_fasta(path), k=k)


def extract_claims(doc: BibRecord, gene_vocabulary: list[str]) -> ExtractionResult:
    """Find nucleotide runs and infer each one's claimed targeting status.

    Polarity comes from a context window around the sequence: an explicit
    non-targeting cue wins; otherwise the nearest gene symbol from the
    reference vocabulary is taken as the claimed target; a sequence with
    neither is left out and noted as unattributed.
    """
    text = doc.screen_text()
    symbol_res = {
        sym: re.compile(r"(?<![A-Za-z0-9])%s(?![A-Za-z0-9])" % re.escape(sym), re.IGNORECASE)
        for sym in gene_vocabulary
    }
    claims: list[NucleotideClaim] = []
    notes: list[str] = []
    for m in _SEQUENCE_RE.finditer(text):
        start, end = m.span()
        window_start = max(0, start - CONTEXT_WINDOW)
        window = text[window_start : end + CONTEXT_WINDOW]
        snippet = window
        lowered = window.lower()
        if any(cue in lowered for cue in _NON_TARGETING_CUES):
            claims.append(
                NucleotideClaim(
                    paper_id=doc.id,
                    sequence=clean_sequence(m.group()),
                    claim=CLAIM_NON_TARGETING,
                    gene_symbol=None,
                    context_snippet=snippet,
                    offset=start,
                )
            )
            continue
        nearest: tuple[int, str] | None = None
        for sym, sym_re in symbol_res.items():
            for sm in sym_re.finditer(window):
                abs_pos = window_start + sm.start()
                distance = abs(abs_pos - start) if abs_pos < start else abs_pos - end
                if nearest is None or (distance, sym) < nearest:
                    nearest = (distance, sym)
        if nearest is None:
            notes.append(f"unattributed sequence at offset {start}: {m.group()}")
            continue
        claims.append(
            NucleotideClaim(
                paper_id=doc.id,
                sequence=clean_sequence(m.group()),
                claim=CLAIM_TARGETS,
                gene_symbol=nearest[1],
                context_snippet=snippet,
                offset=start,
            )
        )
    return ExtractionResult(claims=claims, notes=notes)


def verify(claim: NucleotideClaim, ref: ReferenceIndex) -> ClaimVerdict:
    """Check one claim against the reference on both strands."""
    hits = ref.genes_containing(claim.sequence)
    if claim.claim == CLAIM_NON_TARGETING:
        if not hits:
            return ClaimVerdict(claim, VERDICT_SUPPORTED, None, MATCH_NONE)
        gene = sorted(hits)[0]
        return ClaimVerdict(claim, VERDICT_CONTRADICTED, gene, hits[gene])
    gene = claim.gene_symbol or ""
    if gene not in ref.genes:
        return ClaimVerdict(claim, VERDICT_UNVERIFIABLE, None, MATCH_NONE)
    if gene in hits:
        return ClaimVerdict(claim, VERDICT_SUPPORTED, gene, hits[gene])
    if hits:
        other = sorted(hits)[0]
        return ClaimVerdict(claim, VERDICT_CONTRADICTED, other, hits[other])
    return ClaimVerdict(claim, VERDICT_CONTRADICTED, None, MATCH_NONE)


def load_registry(path) -> list[str]:
    """One name per line; '#' comments and blank lines ignored."""
    names: list[str] = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if line and not line.startswith("#"):
                names.append(line)
    return names


def check_supplier(doc: BibRecord, registry: list[str]) -> list[SupplierCheck]:
    """Flag supplier mentions absent from the known-supplier registry."""
    known = {name.lower() for name in registry}
    text = doc.screen_text()
    seen: set[str] = set()
    checks: list[SupplierCheck] = []
    for pattern in _SUPPLIER_PATTERNS:
        for m in pattern.finditer(text):
            name = m.group(1).strip()
            if name.lower() in seen:
                continue
            seen.add(name.lower())
            checks.append(SupplierCheck(paper_id=doc.id, supplier_name=name, known=name.lower() in known))
    checks.sort(key=lambda c: c.supplier_name.lower())
    return checks


def check_cell_lines(doc: BibRecord, flagged: list[str]) -> list[CellLineCheck]:
    """Flag mentions of known-misidentified cell lines (case-insensitive)."""
    text = doc.screen_text()
    checks: list[CellLineCheck] = []
    for name in flagged:
        if re.search(r"(?<!\w)%s(?!\w)" % re.escape(name), text, re.IGNORECASE):
            checks.append(CellLineCheck(paper_id=doc.id, cell_line=name, misidentified=True))
    return checks
