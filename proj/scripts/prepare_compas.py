#!/usr/bin/env python3
"""Turn the ProPublica compas-scores-two-years.csv export into a numeric CSV.

Applies the usual ProPublica screening filters, keeps a small set of
features, one-hot encodes the categoricals and drops rows with missing
values. The output has a `two_year_recid` label column and is accepted by
`subjfair train --data ... --label two_year_recid` and by the optional
COMPAS acceptance check (SUBJFAIR_COMPAS_CSV).

Usage: prepare_compas.py compas-scores-two-years.csv out.csv
"""

import argparse

import pandas as pd

NUMERIC = ["age", "priors_count", "juv_fel_count", "juv_misd_count",
           "juv_other_count"]
CATEGORICAL = ["sex", "race", "c_charge_degree"]
LABEL = "two_year_recid"


def prepare(raw: pd.DataFrame) -> pd.DataFrame:
    df = raw[(raw["days_b_screening_arrest"] <= 30)
             & (raw["days_b_screening_arrest"] >= -30)
             & (raw["is_recid"] != -1)
             & (raw["c_charge_degree"] != "O")
             & (raw["score_text"] != "N/A")]
    df = df[NUMERIC + CATEGORICAL + [LABEL]].dropna()
    out = pd.get_dummies(df, columns=CATEGORICAL, drop_first=True, dtype=int)
    cols = [c for c in out.columns if c != LABEL] + [LABEL]
    return out[cols].astype({LABEL: int})


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("source")
    parser.add_argument("dest")
    args = parser.parse_args()
    out = prepare(pd.read_csv(args.source))
    out.to_csv(args.dest, index=False)
    print(f"{len(out)} rows, {out.shape[1] - 1} features, "
          f"base rate {out[LABEL].mean():.3f}")


if __name__ == "__main__":
    main()
