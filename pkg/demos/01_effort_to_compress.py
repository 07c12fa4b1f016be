"""Effort-To-Compress on short binary sequences.

Run with ``python demos/01_effort_to_compress.py``.
"""
# %%
# NSRPS repeatedly replaces the most frequent adjacent pair with a new
# symbol. ETC is the number of replacements needed before the sequence
# becomes constant.
from etcforest import etc, gini, shannon_entropy

value, trace = etc([0, 0, 0, 1, 1])
print("ETC(00011) =", value)
for step, seq in zip(trace.steps, trace.sequences[1:]):
    print(f"  replace {step.pair} with {step.replacement}: {''.join(map(str, seq))}")

# %%
# Entropy and Gini only see class proportions. The last four sequences below
# all hold three 1s and three 2s, yet their ETC differs.
print(f"\n{'sequence':>10} {'ETC':>4} {'entropy':>8} {'gini':>6}")
for text in ["111111", "121212", "222111", "122112", "211122"]:
    labels = [int(c) for c in text]
    print(f"{text:>10} {etc(labels)[0]:>4} {shannon_entropy(labels):>8.3f} {gini(labels):>6.3f}")

# %%
# Longer sequences: periodic input compresses in few steps, random input
# needs many more.
import numpy as np

from etcforest import etc_value

rng = np.random.default_rng(0)
periodic = [0, 1, 1] * 100
noisy = rng.integers(0, 2, 300)
print("\nETC periodic (n=300):", etc_value(periodic))
print("ETC random   (n=300):", etc_value(noisy))
