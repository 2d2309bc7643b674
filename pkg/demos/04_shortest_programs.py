"""A desk-scale complexity workbench: shortest programs you can enumerate.

The toy machine has eight opcodes (emit a bit, double the tape, copy the
context string, halt, ...).  Because every program either halts within its
step budget or is cut off, the "length of the shortest program printing x
within t steps" is a total, computable function — a budgeted stand-in for
Kolmogorov complexity that converges to the true value from above as t
grows.
"""

from kolmozip import TinyProgram, joint_bound_report, phi, phi_curve, run_program

x = "1" * 8
print(f"target: {x!r}")
prog = TinyProgram.from_names("OUT1 OUT1 DBL DBL")
result = run_program(prog, t=64)
print(f"hand-written candidate OUT1 OUT1 DBL DBL: "
      f"runs to {result.output!r}, {prog.bit_length} bits\n")

print("budget sweep: value falls as more programs have time to finish")
for t, est in zip((4, 8, 16), phi_curve(x, "", (4, 8, 16))):
    names = est.witness.names() if est.witness else None
    print(f"  t={t:2d}: {est.value_bits:2d} bits   witness {names}")

print("\nthe literal-print ceiling is never beaten for incompressible x:")
for target in ("10110", "11111"):
    est = phi(16, target)
    print(f"  x={target}: value {est.value_bits}, ceiling {est.ceiling_bits}")

print("\njoint coding beats the two-part decomposition by the pairing "
      "overhead:")
print(f"{'x':>6} {'y':>6}  pair  parts  gap")
for a, b in (("1", "1"), ("101", "101"), ("1111", "111")):
    r = joint_bound_report(a, b, t=64)
    print(f"{a:>6} {b:>6}  {r['pair_bits']:4d}  {r['decomposed_bits']:5d}  "
          f"{r['gap']:3d}")
