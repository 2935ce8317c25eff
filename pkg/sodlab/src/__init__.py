"""
sodlab - semi-orthogonal decompositions, finite t-stabilities, HN filtrations
and mutation graphs on D^b(mod A_n) and on the weighted projective line X(2).
"""
