"""Tests para el toolkit de simetrías de la ecuación L_p-Minkowski proyectada."""
