"""Intermediate work is worth bits: conditional compression of worksheets.

Each record is a multi-digit addition written out as (problem, column-by-
column working, answer).  Coding the answer conditioned on problem AND
working costs measurably less than conditioning on the problem alone —
the shown work narrows the predictor's uncertainty even though the answer
is a deterministic function of the problem either way.
"""

from kolmozip import PredictorConfig, compress_conditional, worksheet_corpus

records = worksheet_corpus(seed=7, count=400)
print("a record:")
print(f"  problem : {records[0].k!r}")
print(f"  working : {records[0].m!r}")
print(f"  answer  : {records[0].r!r}\n")

config = PredictorConfig.from_spec("freq:3")
with_work = without_work = 0.0
for k, m, r in records:
    _, bare = compress_conditional(r, k, config)
    _, shown = compress_conditional(r, k + m, config)
    without_work += bare.ideal_bits
    with_work += shown.ideal_bits

n = len(records)
print(f"bits to code the answer, averaged over {n} records:")
print(f"  given the problem only        : {without_work / n:6.2f}")
print(f"  given the problem and working : {with_work / n:6.2f}")
print(f"  saved by conditioning on the intermediate steps: "
      f"{(without_work - with_work) / n:.2f} bits/record")
