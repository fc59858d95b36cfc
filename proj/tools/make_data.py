"""Regenerates the sample inputs in data/."""
import json
import math
import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def write(name, rows):
    (OUT / name).write_text("".join(",".join(str(v) for v in r) + "\n" for r in rows))


def main():
    OUT.mkdir(exist_ok=True)
    n = 1000
    write("two_sine.csv", [[repr(2 * math.sin(2 * math.pi * 10 * j / n) + 0.3 * math.sin(2 * math.pi * 50 * j / n))]
                           for j in range(n)])
    table = {0b100: 0, 0b000: 1, 0b001: 2}
    write("demo3_objective.csv", [[format(x, "03b"), table.get(x, 3)] for x in range(8)])
    write("amps_2q.csv", [[0.5, 0], [0, 0.5], [-0.5, 0], [0, -0.5]])
    (OUT / "phase_unitary.json").write_text(json.dumps([[[1, 0], [0, 0]], [[0, 0], [0, 1]]]) + "\n")
    write("phase_eigvec.csv", [[0], [1]])
    write("vec_a.csv", [[1, 2, 3, 4]])
    write("vec_b.csv", [[2, 0, 1, 3]])
    write("points.csv", [[1, 1], [2, 1.5], [1.5, 2], [8, 8], [2, 2]])

    rng = random.Random(7)
    blobs = []
    for cx, cy in [(1.0, 1.0), (6.0, 2.0), (3.0, 7.0)]:
        for _ in range(10):
            blobs.append([round(cx + rng.gauss(0, 0.4), 4), round(cy + rng.gauss(0, 0.4), 4)])
    write("blobs.csv", blobs)

    write("svm_separable.csv", [[0, 2, 1], [1, 3, 1], [0, -2, -1], [-1, -3, -1]])
    write("svm_xor.csv", [[1, 1, 1], [-1, -1, 1], [1, -1, -1], [-1, 1, -1]])

    pca = []
    for _ in range(20):
        t = rng.gauss(0, 2)
        pca.append([round(t + rng.gauss(0, 0.3), 4), round(0.5 * t + rng.gauss(0, 0.3), 4),
                    round(rng.gauss(0, 0.3), 4)])
    write("pca.csv", pca)

    write("qnn_not.csv", [[0, 0, 1], [1, 0, 0]])
    write("qnn_xor.csv", [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]])


if __name__ == "__main__":
    main()
