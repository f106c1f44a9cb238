"""Regenerate the golden instance corpus under tests/golden/.

Every file is named {kind}-{seed}.instance and must equal the canonical
rendering of gen_instance(kind, seed) byte for byte; the determinism
acceptance test re-derives each file from its name and compares.  Run this
only when the generator or the file format changes on purpose, and expect
the diff to show up in review.
"""

from pathlib import Path

from flexconn.generators import gen_instance
from flexconn.instance_io import InstanceDoc, kind_of, render_instance

CORPUS = [
    ("fgc-q1", 0),
    ("fgc-q1", 1),
    ("fgc-p1", 0),
    ("fgc-p1", 1),
    ("fgc-any", 0),
    ("fst", 0),
    ("fst", 1),
    ("fst", 2),
    ("ncfgc", 0),
    ("ncfgc", 1),
]


def main() -> None:
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "golden"
    out_dir.mkdir(parents=True, exist_ok=True)
    for kind, seed in CORPUS:
        instance = gen_instance(kind, seed)
        doc = InstanceDoc(kind_of(instance), instance)
        path = out_dir / f"{kind}-{seed}.instance"
        path.write_text(render_instance(doc))
        print(path)


if __name__ == "__main__":
    main()
