"""Regenerate data/forms/*.txt from PARI/GP (cypari2).

Forms are weight-4 rational newforms identified by (level, index into
mfeigenbasis of the new space). Indices were matched once against known
L-values and first coefficients.
"""
import argparse
import pathlib

import cypari2

# N/i label -> (level, eigenbasis index, LMFDB label)
# LMFDB letters follow orbits sorted by dimension then trace vector; not checked
# against the live site (see ingest fingerprints).
FORMS = {
    "6/1": (6, 0, "6.4.a.a"),
    "8/1": (8, 0, "8.4.a.a"),
    "12/1": (12, 0, "12.4.a.a"),
    "17/1": (17, 0, "17.4.a.a"),
    "21/1": (21, 1, "21.4.a.a"),
    "32/1": (32, 1, "32.4.a.b"),
    "32/2": (32, 0, "32.4.a.c"),
    "64/1": (64, 2, "64.4.a.c"),
    "192/2": (192, 3, "192.4.a.i"),
    "192/7": (192, 9, "192.4.a.c"),
    "272/4": (272, 0, "272.4.a.d"),
    "336/7": (336, 6, "336.4.a.f"),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=3000)
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data" / "forms"))
    args = ap.parse_args()
    pari = cypari2.Pari()
    pari.allocatemem(2 * 10**9)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for label, (level, idx, lmfdb) in FORMS.items():
        mf = pari("mfinit([%d,4],0)" % level)
        basis = pari.mfeigenbasis(mf)
        fields = pari.mffields(mf)
        if pari.poldegree(fields[idx]) != 1:
            raise SystemExit("%s: eigenform %d is not rational" % (label, idx))
        coefs = [int(c) for c in pari.mfcoefs(basis[idx], args.count)]
        # Atkin-Lehner at Q = N is the Fricke involution; one eigenvalue per eigenform
        fricke = int(pari.mfatkineigenvalues(mf, level)[idx][0])
        name = label.replace("/", "_") + ".txt"
        with open(out / name, "w") as fh:
            fh.write("label\t%s\n" % label)
            fh.write("lmfdb\t%s\n" % lmfdb)
            fh.write("level\t%d\n" % level)
            fh.write("weight\t4\n")
            fh.write("fricke\t%d\n" % fricke)
            fh.write("source\tpari mfeigenbasis index %d\n" % idx)
            fh.write("an\t%s\n" % " ".join(str(c) for c in coefs[1:]))
        print(label, level, idx, coefs[1:8], "fricke", fricke)


if __name__ == "__main__":
    main()
