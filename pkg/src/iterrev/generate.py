"""Random formulas, preorders and sequences for tests and experiments."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .formula import (
    Alphabet,
    And,
    Formula,
    Iff,
    Implies,
    ModelSet,
    Not,
    Or,
    Var,
    enumerate_models,
)
from .preorder import KINDS, ChangeOp, ChangeSequence, TotalPreorder, empty_preorder, apply
from .sat import SatBackend

CONNECTIVES = ("not", "and", "or", "implies", "iff")


@dataclass
class GenConfig:
    num_vars: int = 3
    max_depth: int = 3
    min_len: int = 1
    max_len: int = 6
    kinds: tuple[str, ...] = KINDS
    leaf_prob: float = 0.3
    connectives: tuple[str, ...] = CONNECTIVES
    seed: int = 0

    def alphabet(self) -> Alphabet:
        return Alphabet(default_names(self.num_vars))

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"v{k}" for k in range(n)]


def random_formula(rng: random.Random, names: list[str], depth: int = 3,
                   leaf_prob: float = 0.3,
                   connectives: tuple[str, ...] = CONNECTIVES) -> Formula:
    if depth == 0 or rng.random() < leaf_prob:
        v = Var(rng.choice(names))
        return Not(v) if rng.random() < 0.5 else v
    kind = rng.choice(connectives)
    sub = lambda: random_formula(rng, names, depth - 1, leaf_prob, connectives)
    if kind == "not":
        return Not(sub())
    if kind == "and":
        return And((sub(), sub()))
    if kind == "or":
        return Or((sub(), sub()))
    if kind == "implies":
        return Implies(sub(), sub())
    return Iff(sub(), sub())


def random_consistent(rng: random.Random, alphabet: Alphabet, cfg: GenConfig,
                      backend: SatBackend | None = None) -> Formula:
    """Rejection-sample a satisfiable formula.

    Small alphabets are checked by truth table; larger ones need ``backend``
    (its call counter is bumped, so pass a throwaway one).
    """
    names = list(alphabet.names)
    while True:
        f = random_formula(rng, names, cfg.max_depth, cfg.leaf_prob, cfg.connectives)
        if len(alphabet) <= 12:
            if enumerate_models(f, alphabet):
                return f
        elif (backend or SatBackend()).is_consistent(f):
            return f


def random_sequence(rng: random.Random, cfg: GenConfig, length: int | None = None,
                    backend: SatBackend | None = None) -> ChangeSequence:
    alphabet = cfg.alphabet()
    n = length if length is not None else rng.randint(cfg.min_len, cfg.max_len)
    ops = [ChangeOp(rng.choice(cfg.kinds), random_consistent(rng, alphabet, cfg, backend))
           for _ in range(n)]
    return ChangeSequence(alphabet, ops)


def random_partition(rng: random.Random, alphabet: Alphabet,
                     max_classes: int = 5, allow_empty: bool = True) -> TotalPreorder:
    """Arbitrary total preorder: each model lands in a random class."""
    k = rng.randint(1, max_classes)
    masks = [0] * k
    for m in range(alphabet.num_models):
        masks[rng.randrange(k)] |= 1 << m
    if not allow_empty:
        masks = [c for c in masks if c] or [alphabet.full_mask]
    return TotalPreorder.from_masks(alphabet, masks)


def random_lex_preorder(rng: random.Random, alphabet: Alphabet, cfg: GenConfig,
                        max_ops: int = 4) -> TotalPreorder:
    C = empty_preorder(alphabet)
    for _ in range(rng.randint(0, max_ops)):
        C = apply(C, ChangeOp("lex", random_consistent(rng, alphabet, cfg)))
    return C


def random_preorder(rng: random.Random, alphabet: Alphabet, cfg: GenConfig) -> TotalPreorder:
    """Half the time an arbitrary partition, otherwise a lex-built preorder."""
    if rng.random() < 0.5:
        return random_partition(rng, alphabet)
    return random_lex_preorder(rng, alphabet, cfg)


def random_model_set(rng: random.Random, alphabet: Alphabet) -> ModelSet:
    return ModelSet(alphabet, rng.getrandbits(alphabet.num_models) if alphabet.num_models else 0)
