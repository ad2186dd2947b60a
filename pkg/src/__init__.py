"""
Paquete principal de simetrías de Lie de la ecuación L_p-Minkowski proyectada.
"""

__version__ = "1.0.0"
__author__ = "Grupo de Geometría Convexa"

from .exact import MPoly, RatMatrix, VarTable, nullspace, rank
from .prolongation import VectorFieldAnsatz, determining_system, prolong2
from .classify import LieAlgebraBasis, classify, scan
from .geometry import ScalarField, ellipsoid_field, unit_ball
from .actions import BodyTransform, GroupAction, resolve, sl_decompose
from .verify import ResidualReport, SamplePlan, certify_action, certify_lemma, certify_resolution
from .report_generator import ReportGenerator

__all__ = [
    'MPoly',
    'RatMatrix',
    'VarTable',
    'nullspace',
    'rank',
    'VectorFieldAnsatz',
    'determining_system',
    'prolong2',
    'LieAlgebraBasis',
    'classify',
    'scan',
    'ScalarField',
    'ellipsoid_field',
    'unit_ball',
    'BodyTransform',
    'GroupAction',
    'resolve',
    'sl_decompose',
    'ResidualReport',
    'SamplePlan',
    'certify_action',
    'certify_lemma',
    'certify_resolution',
    'ReportGenerator',
]
