"""Exact structure-constant computations for the Hopf algebras H_p = A * KC_2, their integral forms and a quadratic descent."""
