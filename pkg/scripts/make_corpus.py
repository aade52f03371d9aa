"""Write randomized regression files corpus/random_NN.seq (seeded, reproducible).

    python3 scripts/make_corpus.py --count 12 --out corpus
"""
import argparse
import random
from dataclasses import dataclass
from pathlib import Path

from iterrev.cli import dumps
from iterrev.formula import Alphabet
from iterrev.generate import GenConfig, random_consistent, random_sequence


@dataclass
class CorpusConfig:
    count: int = 12
    seed: int = 99
    out: str = "corpus"
    min_vars: int = 2
    max_vars: int = 5
    max_len: int = 10
    queries: int = 3


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=CorpusConfig.count)
    ap.add_argument("--seed", type=int, default=CorpusConfig.seed)
    ap.add_argument("--out", default=CorpusConfig.out)
    a = ap.parse_args()
    cfg = CorpusConfig(count=a.count, seed=a.seed, out=a.out)
    rng = random.Random(cfg.seed)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for k in range(cfg.count):
        gen = GenConfig(num_vars=rng.randint(cfg.min_vars, cfg.max_vars), max_depth=3,
                        max_len=cfg.max_len)
        seq = random_sequence(rng, gen)
        queries = [random_consistent(rng, seq.alphabet, gen) for _ in range(cfg.queries)]
        path = out / f"random_{k:02d}.seq"
        path.write_text(f"# generated by scripts/make_corpus.py, seed {cfg.seed}, file {k}\n"
                        + dumps(seq.alphabet, seq.ops, queries))
        print(path)


if __name__ == "__main__":
    main()
