"""Circle and line dynamics with exact rational arithmetic."""
from .line import PLLineMap, UnboundedOrbit
from .maps import (INF, FixedPointSet, LiftedHomeo, LiftPoint, MobiusMap, OrientationError,
                   PLCircleHomeo, QuadraticSurd, element_ball, euler_z, evaluate_word, lift,
                   parse_generator, parse_generators, rotation)
