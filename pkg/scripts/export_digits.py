"""Regenerate data/digits.csv from scikit-learn's bundled digits set.

Only needed to rebuild the committed file; the package itself never imports
scikit-learn.
"""
import os

from sklearn.datasets import load_digits


def main() -> None:
    bundle = load_digits()
    out_path = os.path.join(os.path.dirname(__file__), os.pardir, "data", "digits.csv")
    lines = [",".join([f"pixel_{i}" for i in range(64)] + ["label"])]
    for features, label in zip(bundle.data, bundle.target):
        cells = ["%d" % v if float(v).is_integer() else repr(float(v)) for v in features]
        lines.append(",".join(cells + [str(int(label))]))
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines) - 1} rows to {os.path.abspath(out_path)}")


if __name__ == "__main__":
    main()
