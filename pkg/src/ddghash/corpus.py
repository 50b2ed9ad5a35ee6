"""On-disk corpus of program feature files.

Layout: one <program_id>.features.json per program plus a derived
index.json. Feature files are the source of truth; the index (per-program
cardinalities and the hash -> programs inverted index) is rebuilt from
them on demand. Files are written with sorted keys and fixed formatting
so identical inputs produce byte-identical files, and writes go through a
temp file so a failed ingest never leaves partial output.
"""

import hashlib
import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .blocks import build_cfg, segment
from .ddg import InstructionFamilyPolicy, LabelMode
from .disasm import parse_listing_with_report
from .errors import DdghashError, UnknownProgram
from .features import (FeatureParams, ProgramFeatureSet, compare,
                       extract_feature_set)
from .tfidf import load_default_dictionary, tf_vector
from .wlhash import WLParams

FORMAT_VERSION = 1


@dataclass
class FeatureFile:
    feature_set: ProgramFeatureSet
    term_counts: dict  # block id -> tuple of per-stem counts (all blocks)
    term_stems: tuple
    source_digest: str
    toolkit_version: str = __version__


def encode_feature_file(ff: FeatureFile) -> str:
    fs = ff.feature_set
    doc = {
        "format_version": FORMAT_VERSION,
        "program_id": fs.program_id,
        "params": fs.params.as_dict(),
        "block_map": {str(i): h for i, h in fs.block_map.items()},
        "hashes": sorted(fs.hashes),
        "order_edges": sorted([a, b] for a, b in fs.order_edges),
        "diagnostics": fs.diagnostics,
        "term_stems": list(ff.term_stems),
        "term_counts": {str(i): list(c) for i, c in ff.term_counts.items()},
        "source_digest": ff.source_digest,
        "toolkit_version": ff.toolkit_version,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def decode_feature_file(text: str) -> FeatureFile:
    doc = json.loads(text)
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise DdghashError(f"unsupported feature file format version {version!r}")
    p = doc["params"]
    params = FeatureParams(
        label_mode=LabelMode(p["label_mode"]),
        policy=InstructionFamilyPolicy(p["policy"]),
        wl=WLParams(iterations=p["wl_iterations"], digest_bits=p["digest_bits"]),
    )
    block_map = {int(i): h for i, h in doc["block_map"].items()}
    block_map = dict(sorted(block_map.items()))
    fs = ProgramFeatureSet(
        program_id=doc["program_id"],
        params=params,
        block_map=block_map,
        order_edges=frozenset((a, b) for a, b in doc["order_edges"]),
        diagnostics=doc["diagnostics"],
    )
    return FeatureFile(
        feature_set=fs,
        term_counts={int(i): tuple(c) for i, c in doc["term_counts"].items()},
        term_stems=tuple(doc["term_stems"]),
        source_digest=doc["source_digest"],
        toolkit_version=doc["toolkit_version"],
    )


def build_feature_file(text: str, program_id: str, params: FeatureParams,
                       call_terminates=True) -> FeatureFile:
    """Run the full pipeline on listing text: parse, segment, DDG, hash."""
    functions, report = parse_listing_with_report(text)
    dictionary = load_default_dictionary()
    pairs = []
    term_counts = {}
    next_id = 0
    for fn in functions:
        blocks = segment(fn, call_terminates=call_terminates, first_id=next_id)
        next_id += len(blocks)
        cfg = build_cfg(blocks, call_terminates=call_terminates)
        pairs.append((blocks, cfg))
        for b in blocks:
            term_counts[b.id] = tf_vector(b, dictionary).counts
    diagnostics = report.as_dict()
    diagnostics["indirect_transfers"] = sum(c.indirect_transfers for _, c in pairs)
    diagnostics["external_targets"] = sum(len(c.external_targets) for _, c in pairs)
    diagnostics["dangling_targets"] = sum(len(c.dangling_targets) for _, c in pairs)
    fs = extract_feature_set(program_id, pairs, params, diagnostics)
    return FeatureFile(
        feature_set=fs,
        term_counts=term_counts,
        term_stems=dictionary.stems,
        source_digest="sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )


class Corpus:
    def __init__(self, root):
        self.root = Path(root)

    def _path(self, program_id) -> Path:
        return self.root / f"{program_id}.features.json"

    def ids(self):
        return sorted(p.name[: -len(".features.json")]
                      for p in self.root.glob("*.features.json"))

    def load(self, program_id) -> FeatureFile:
        path = self._path(program_id)
        if not path.is_file():
            raise UnknownProgram(program_id)
        return decode_feature_file(path.read_text())

    def save(self, ff: FeatureFile) -> Path:
        """Atomic write; leaves the file untouched when bytes are unchanged."""
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(ff.feature_set.program_id)
        payload = encode_feature_file(ff)
        if path.is_file() and path.read_text() == payload:
            return path
        tmp = path.with_suffix(".tmp")
        tmp.write_text(payload)
        os.replace(tmp, path)
        return path

    def ingest(self, disasm_path, program_id, params: FeatureParams,
               call_terminates=True) -> FeatureFile:
        text = Path(disasm_path).read_text()
        ff = build_feature_file(text, program_id, params,
                                call_terminates=call_terminates)
        self.save(ff)
        return ff

    def compare(self, a_id, b_id):
        return compare(self.load(a_id).feature_set, self.load(b_id).feature_set)

    def pairwise_matrix(self, ids):
        """All pairwise reports keyed (a, b) for a != b; loads each set once."""
        sets = {pid: self.load(pid).feature_set for pid in ids}
        out = {}
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                rep = compare(sets[a], sets[b])
                out[(a, b)] = rep
                out[(b, a)] = compare(sets[b], sets[a])
        return out

    def nearest(self, query_id, k):
        """Top-k neighbors by jaccard; ties break on how much of the
        candidate sits inside the query, then on id."""
        query = self.load(query_id).feature_set
        ranked = []
        for pid in self.ids():
            if pid == query_id:
                continue
            rep = compare(query, self.load(pid).feature_set)
            ranked.append((pid, rep))
        ranked.sort(key=lambda x: (-x[1].jaccard, -x[1].containment_b_in_a, x[0]))
        return ranked[:k]

    def find_containments(self, threshold):
        """Ordered pairs (inner, outer, containment) with
        |inner ∩ outer| / |inner| >= threshold, sorted descending."""
        ids = self.ids()
        sets = {pid: self.load(pid).feature_set.hashes for pid in ids}
        rows = []
        for inner in ids:
            si = sets[inner]
            if not si:
                continue
            for outer in ids:
                if inner == outer:
                    continue
                containment = Fraction(len(si & sets[outer]), len(si))
                if containment >= threshold:
                    rows.append((inner, outer, containment))
        rows.sort(key=lambda r: (-r[2], r[0], r[1]))
        return rows

    def rebuild_index(self):
        """Derive index.json from the feature files (they stay the source
        of truth; the index is never read back for answers)."""
        programs = {}
        inverted = {}
        for pid in self.ids():
            ff = self.load(pid)
            fs = ff.feature_set
            programs[pid] = {
                "file": f"{pid}.features.json",
                "hashes": len(fs.hashes),
                "blocks": len(ff.term_counts),
            }
            for h in fs.hashes:
                inverted.setdefault(h, []).append(pid)
        index = {
            "format_version": FORMAT_VERSION,
            "programs": programs,
            "inverted": {h: sorted(ps) for h, ps in inverted.items()},
        }
        path = self.root / "index.json"
        payload = json.dumps(index, sort_keys=True, indent=2) + "\n"
        if not (path.is_file() and path.read_text() == payload):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(payload)
            os.replace(tmp, path)
        return index
