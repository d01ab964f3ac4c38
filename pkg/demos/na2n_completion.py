"""Complete NA_{2,N} and look at what the completion adds.

    python3 demos/na2n_completion.py [N] [max_arity]
"""
import sys
import time

from nkoszul.groebner import Bounds, buchberger, leading_term, normal_enumerator
from nkoszul.na2n import na2n_expected_gb, na2n_presentation
from nkoszul.trees import element_to_text

n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
max_arity = int(sys.argv[2]) if len(sys.argv) > 2 else 8

p = na2n_presentation(n)
o = p.default_order()
print(f"NA_2,{n}: generators", ", ".join(g.name for g in p.gens))
for r in p.relations:
    print("  rel ", element_to_text(r))

t0 = time.perf_counter()
gb = buchberger(p.relations, o, Bounds(max_arity))
print(f"\ncompleted up to arity {max_arity} in {time.perf_counter() - t0:.2f}s, {len(gb)} elements")
inputs = {leading_term(r, o)[0] for r in p.relations}
new = [g for g in gb if g.lt not in inputs]
print(f"{len(new)} tower relations added, e.g.")
for g in new[:3]:
    print("  ", element_to_text(g.element))

want = {element_to_text(e) for e in na2n_expected_gb(n, Bounds(max_arity), order=o)}
print("\nmatches the closed-form family:", want == {element_to_text(g.element) for g in gb})

en = normal_enumerator(gb, p.gens)
counts = [sum(len(en.trees(a, w)) for w in range(a)) for a in range(1, max_arity + 1)]
print("normal monomials per arity:", counts)
