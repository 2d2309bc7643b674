"""Compression as entropy estimation, and capacity as the price of it.

A Markov chain of known order has a computable entropy rate.  A frequency
predictor whose context length matches the order converges toward that
rate; one with too little context stalls at the entropy of a coarser
marginal, and one with too much splits its evidence across contexts it
rarely revisits.  The rungs of the ladder are measurements, not scores.
"""

from kolmozip import MarkovSpec, PredictorConfig, compress, entropy_rate, generate

SPEC = MarkovSpec(order=2, alphabet=4, concentration=8, seed=42)
SIZE = 96 << 10

data = generate(SPEC, SIZE)
h = entropy_rate(SPEC)
print(f"source: order-{SPEC.order} chain over {SPEC.alphabet} symbols, "
      f"entropy rate {h:.4f} bits/byte")
print(f"sample: {SIZE} bytes\n")

print("frequency ladder (context length 0..3):")
for order in range(4):
    _, stats = compress(data, PredictorConfig.from_spec(f"freq:{order}"))
    bar = "#" * round(6 * (stats.mean_bpb - h))
    print(f"  freq:{order}  {stats.mean_bpb:6.4f} bpb   excess {bar}")

print("\nlearning is front-loaded: bits/byte over successive 8 KiB windows")
_, stats = compress(data, PredictorConfig.from_spec(f"freq:{SPEC.order}"))
window = 8 << 10
for i in range(SIZE // window):
    chunk = stats.token_bits[i * window:(i + 1) * window]
    print(f"  bytes {i * window:6d}..{(i + 1) * window - 1:6d}: "
          f"{chunk.mean():6.4f} bpb")
print(f"\nentropy rate for reference: {h:.4f} bpb")
