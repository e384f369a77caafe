#!/usr/bin/env python3
"""Regenerates core/data/wavelet_filters.txt from PyWavelets.

Usage: python3 tools/gen_wavelet_catalog.py > core/data/wavelet_filters.txt
"""
import pywt

FAMILIES = [
    ("daubechies", ["db%d" % i for i in range(1, 11)]),
    ("symlets", ["sym%d" % i for i in range(2, 11)]),
    ("coiflets", ["coif%d" % i for i in range(1, 6)]),
    ("biorthogonal", ["bior" + s for s in ("1.1", "1.3", "2.2", "3.3", "4.4", "6.8")]),
    ("reverse_biorthogonal", ["rbio" + s for s in ("1.1", "1.3", "2.2", "3.3", "4.4", "6.8")]),
    ("discrete_meyer", ["dmey"]),
]


def row(tag, values):
    return tag + " " + str(len(values)) + " " + " ".join(repr(float(v)) for v in values)


def main():
    print("# ispar wavelet filter catalog")
    print("# generated by tools/gen_wavelet_catalog.py from PyWavelets %s" % pywt.__version__)
    print("version 1")
    for family, names in FAMILIES:
        for name in names:
            w = pywt.Wavelet(name)
            if name == "dmey":
                kind = "approximate"
            elif w.orthogonal:
                kind = "orthogonal"
            else:
                kind = "biorthogonal"
            print("filter %s %s %s" % (name, family, kind))
            print(row("dec_lo", w.dec_lo))
            print(row("dec_hi", w.dec_hi))
            print(row("rec_lo", w.rec_lo))
            print(row("rec_hi", w.rec_hi))
            print("end")


if __name__ == "__main__":
    main()
