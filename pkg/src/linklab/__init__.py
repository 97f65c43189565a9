"""Link diagrams, Milnor invariants, Seifert surface conditions and Kirby moves."""

from .diagram import Diagram, DiagramError, linking_matrix, validate_diagram
from .kirby import SurgeryPresentation, h1_surgery
from .milnor import is_homotopy_trivial, mu_bar, mu_table
from .scenarios import ScenarioSpec, build_universal_link, fig9_example, verify_theorem1
from .seifert import CurveSystem, check_lagrangian_trivial, check_lagrangian_trivial_plus, seifert_matrix_of

__version__ = "0.1.0"
