"""
Re-deriving the price-band gap from a snapshot
==============================================

Leaderboards change daily, so published curves cannot be reproduced bit
for bit. Export a snapshot yourself as CSV with the columns

    name,date,price_usd_per_mtok,score[,params]

(dates as YYYY-MM-DD, blended $ per million tokens, scores in [0, 1] or
percentages with ``--score-scale 100``) and run

    python rederive_leaderboard_gap.py snapshot.csv --band 0.5:1 --score-scale 100

Without an argument the bundled synthetic sample is used. The same result
comes from ``meek empirical snapshot.csv --band 0.5:1``.
"""
import argparse
from pathlib import Path

from meek.empirical import gap_series, gaps_to_csv, param_band_gap_series, parse_records
from meek.svg import write_chart

ap = argparse.ArgumentParser()
ap.add_argument("csv", nargs="?", default=Path(__file__).with_name("data") / "sample_leaderboard.csv")
ap.add_argument("--band", default="0.5:1")
ap.add_argument("--score-scale", type=float, default=1.0)
ap.add_argument("--param-threshold", type=float, default=7e9)
args = ap.parse_args()

records = parse_records(Path(args.csv).read_text(encoding="utf-8"), score_scale=args.score_scale)
lo, hi = (float(v) for v in args.band.split(":"))
print(f"{len(records)} models from {min(r.release_date for r in records)}")

# Best overall vs best at a fixed serving price, month by month.
by_price = gap_series(records, (lo, hi), "monthly")
print(gaps_to_csv(by_price), end="")

# Same question with a parameter cap as the proxy for training compute.
if any(r.params for r in records):
    by_size = param_band_gap_series(records, args.param_threshold, "quarterly")
    last = by_size[-1]
    print(f"<= {args.param_threshold:.0e} params, latest gap: {last.gap}")

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
origin = by_price[0].date
write_chart(out / "leaderboard_gap.svg",
            {f"${lo:g}-{hi:g}/Mtok": [((p.date - origin).days / 365.25, p.gap)
                                        for p in by_price if p.gap is not None]},
            title=f"Score gap since {origin}", xlabel="years", ylabel="score gap")
