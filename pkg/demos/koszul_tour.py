"""K[x]/(x^3), a random presentation, and the first F2 counterexample.

    python3 demos/koszul_tour.py
"""
import random

from nkoszul.koszul import (check_yoneda_dims, cobar_complex, is_n_koszul, kappa,
                            maurer_cartan_check, search_non_koszul)
from nkoszul.linalg import GF
from nkoszul.nhomog import (NHomogPresentation, dual_presentation, koszul_dual_coalgebra,
                            presentation_compare, random_presentation)

W = 7


def show(a, label):
    print(f"== {label}: {a}")
    print("   dims A   ", a.quotient().dims(W))
    print("   dims A^v ", dual_presentation(a).quotient().dims(W))
    c = koszul_dual_coalgebra(a, W)
    print("   kappa Maurer-Cartan:", bool(maurer_cartan_check(kappa(a, W, c), W)))
    v = is_n_koszul(a, W)
    print("   verdict:", v.label, "" if v.witness is None else f"witness (weight, degree, dim) = {v.witness}")
    y = check_yoneda_dims(a, min(W, 6))
    print("   bar Ext = A^! pattern:", y.match, "" if y.match else f"mismatch at weights {y.mismatches}")
    q = a.quotient()
    cb = cobar_complex(c, 6)
    print("   cobar concentrated in degree 0:", cb.concentrated([q.dim(m) for m in range(7)]))


show(NHomogPresentation.from_words(3, 1, [{(0, 0, 0): 1}]), "K[x]/(x^3)")
print("   A^! matches its NA_2,3 presentation:", presentation_compare(
    NHomogPresentation.from_words(3, 1, [{(0, 0, 0): 1}]), W).ok)

show(random_presentation(random.Random(7), 3, 2, 3), "random, dim V = 2, dim R = 3")

res = search_non_koszul(v_dim=2, n=3, max_dim_r=3, max_weight=9, field=GF(2))
print(f"\nF2 search: {res.examined} subspaces examined")
show(res.presentation, "first non-Koszul")
print("   relation:", res.presentation.relation_words())
