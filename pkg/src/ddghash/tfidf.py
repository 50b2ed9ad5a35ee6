"""Stemmed-opcode term frequency baseline.

Mnemonics collapse into a fixed 32-stem dictionary via longest-prefix
rules shipped as a plain-text data file (data/stem_rules.txt); anything
the table misses lands on the reserved stem "other". Each basic block
yields one 32-dimensional count vector, and a corpus of blocks yields a
smoothed idf so no stem weight is ever zero.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .errors import EmptyCorpus, ZeroVector

OTHER = "other"


@dataclass(frozen=True)
class TermDictionary:
    stems: tuple  # 32 stems, fixed order
    rules: dict  # prefix pattern -> stem

    def __post_init__(self):
        assert len(self.stems) == len(set(self.stems))
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.stems)})
        object.__setattr__(self, "_max_len", max(map(len, self.rules)))

    def stem(self, mnemonic: str) -> str:
        for length in range(min(len(mnemonic), self._max_len), 0, -1):
            hit = self.rules.get(mnemonic[:length])
            if hit is not None:
                return hit
        return OTHER

    def index(self, stem: str) -> int:
        return self._index[stem]


def parse_rules(text) -> TermDictionary:
    """Build a dictionary from "pattern stem" lines; stem order follows
    first appearance, with "other" appended last."""
    rules = {}
    order = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        pattern, stem = line.split()
        rules[pattern] = stem
        if stem not in order:
            order.append(stem)
    if OTHER not in order:
        order.append(OTHER)
    return TermDictionary(stems=tuple(order), rules=rules)


def load_default_dictionary() -> TermDictionary:
    text = resources.files("ddghash").joinpath("data/stem_rules.txt").read_text()
    return parse_rules(text)


def stem(mnemonic: str, dictionary: TermDictionary | None = None) -> str:
    if dictionary is None:
        dictionary = load_default_dictionary()
    return dictionary.stem(mnemonic)


@dataclass(frozen=True)
class TermFrequencyVector:
    block_id: int
    counts: tuple  # one count per dictionary stem
    total: int


def tf_vector(block, dictionary: TermDictionary) -> TermFrequencyVector:
    counts = [0] * len(dictionary.stems)
    for ins in block.instructions:
        counts[dictionary.index(dictionary.stem(ins.mnemonic))] += 1
    return TermFrequencyVector(
        block_id=block.id, counts=tuple(counts), total=len(block.instructions)
    )


@dataclass(frozen=True)
class CorpusIdf:
    doc_count: int
    df: tuple
    idf: tuple


def idf(vectors) -> CorpusIdf:
    """Smoothed inverse document frequency: ln((1+N)/(1+df)) + 1."""
    vectors = list(vectors)
    if not vectors:
        raise EmptyCorpus("idf needs at least one block")
    n = len(vectors)
    dims = len(vectors[0].counts)
    df = [0] * dims
    for vec in vectors:
        for i, c in enumerate(vec.counts):
            if c > 0:
                df[i] += 1
    weights = tuple(math.log((1 + n) / (1 + d)) + 1.0 for d in df)
    return CorpusIdf(doc_count=n, df=tuple(df), idf=weights)


@dataclass(frozen=True)
class TermDistribution:
    totals: tuple  # (stem, count), descending by count then stem
    instruction_count: int
    modal_stem: str
    modal_share: Fraction


def distribution_from_vectors(vectors, dictionary) -> TermDistribution:
    vectors = list(vectors)
    if not vectors:
        raise EmptyCorpus("no blocks to aggregate")
    agg = [0] * len(dictionary.stems)
    for vec in vectors:
        for i, c in enumerate(vec.counts):
            agg[i] += c
    pairs = sorted(zip(dictionary.stems, agg), key=lambda kv: (-kv[1], kv[0]))
    total = sum(agg)
    modal_stem, modal_count = pairs[0]
    return TermDistribution(
        totals=tuple(pairs),
        instruction_count=total,
        modal_stem=modal_stem,
        modal_share=Fraction(modal_count, total) if total else Fraction(0),
    )


def term_distribution(blocks, dictionary: TermDictionary | None = None) -> TermDistribution:
    if dictionary is None:
        dictionary = load_default_dictionary()
    return distribution_from_vectors(
        (tf_vector(b, dictionary) for b in blocks), dictionary
    )


def cosine_similarity(u: TermFrequencyVector, v: TermFrequencyVector,
                      weights=None) -> float:
    """Cosine over the 32 dimensions, optionally idf-weighted."""
    if weights is None:
        weights = [1.0] * len(u.counts)
    wu = [c * w for c, w in zip(u.counts, weights)]
    wv = [c * w for c, w in zip(v.counts, weights)]
    nu = math.sqrt(sum(x * x for x in wu))
    nv = math.sqrt(sum(x * x for x in wv))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine undefined for a zero vector")
    return sum(x * y for x, y in zip(wu, wv)) / (nu * nv)
