"""Writes exporter_10.blme (+ sidecar), a 10-sentence store laid out the way
the embedding exporter writes it: mean-pooled final-layer vectors keyed by
exact sentence text. Vectors here are synthetic but deterministic."""

import json
import math
import struct
from pathlib import Path

DIM = 768
SENTENCES = [
    "Le garçon jette-t-il la pierre?",
    "L'équipe félicite le gagnant.",
    "L'équipe coûte-t-elle?",
    "Le chanteur chante.",
    "Comment la scène est-elle décrite par l'écrivain ?",
    "Un livre est écrit par l'auteur.",
    "Quand la musique a-t-elle été composée?",
    "Les données ont été analysées.",
    "La squadra è tifata dal bambino.",
    "Lo chef cucina.",
]


def vector(i):
    return [math.sin(0.37 * (i + 1) * (k + 1)) + 0.01 * k / DIM for k in range(DIM)]


def main():
    out = Path(__file__).with_name("exporter_10.blme")
    with out.open("wb") as f:
        f.write(b"BLME")
        f.write(struct.pack("<BI", 1, DIM))
        for i, s in enumerate(SENTENCES):
            key = s.encode("utf-8")
            f.write(struct.pack("<I", len(key)))
            f.write(key)
            f.write(struct.pack("<%df" % DIM, *vector(i)))
    sidecar = {
        "provider": "exporter",
        "model": "fixture/deterministic-sine",
        "layer": "last",
        "pooling": "mean, special tokens excluded",
        "normalization": "none",
        "duplicates_dropped": 0,
        "truncated": [],
    }
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
