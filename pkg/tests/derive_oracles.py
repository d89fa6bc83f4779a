"""Re-derive the frozen reference constants used in the tests at 40 digits.

Independent of the package: everything is written out from the formulas
with mpmath. Run ``python tests/derive_oracles.py``.
"""
import mpmath as mp

mp.mp.dps = 40
f = mp.mpf


def law(c, a=f(1070), alpha=f("0.155"), l0=f("1.7")):
    return l0 + a * c ** -alpha


def peak_time(gh, galg, gi, alpha):
    s = mp.log(gh * galg)
    return mp.log((s + mp.log(gi)) / s) / (alpha * mp.log(gi))


gh, galg, gi, ginf = f("1.4"), f("2.8"), f(5) / f("1.4"), f(9) / f("1.4")
oracles = {
    "loss at C=1e20": law(f("1e20")),
    "shifted ViT law at C=0": f("0.09") + f("0.26") * (f("0.01")) ** f("-0.35"),
    "peak time, alpha=0.155": peak_time(gh, galg, gi, f("0.155")),
    "peak time, alpha=0.057": peak_time(gh, galg, gi, f("0.057")),
    "inference crossover": (mp.log(f("1e20")) - mp.log(120) - 2 * mp.log(f("5e8")))
                           / (2 * mp.log(gh * ginf) + mp.log(galg) - mp.log(gh * galg * gi)),
    "inference delta at t=0": law(120 * f("5e8") ** 2) - law(f("1e20")),
    "(1-2a) ln((1-a)/a), a=0.05": (1 - 2 * f("0.05")) * mp.log(f("0.95") / f("0.05")),
    "tokens at dL=0.8, a=b=0.05": (1 - 2 * f("0.05")) * mp.log(f("0.95") / f("0.05")) / f("0.8"),
    "tokens under A, a=0.01 b=0.10 dL=0.5":
        ((1 - f("0.1")) * mp.log((1 - f("0.1")) / f("0.01"))
         + f("0.1") * mp.log(f("0.1") / (1 - f("0.01")))) / f("0.5"),
    "parametric loss, N=175e9 D=300e9":
        f("1.69") + f("406.4") * f("175e9") ** f("-0.34") + f("410.7") * f("300e9") ** f("-0.28"),
}

if __name__ == "__main__":
    for name, v in oracles.items():
        print(f"{name:<40} {mp.nstr(v, 20)}")
