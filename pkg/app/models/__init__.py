# Load all models so callers can import from app.models directly
from app.models.algebra_model import AlgebraElement, FiniteAbelianAlgebra, FreeWord, LinearCombination, SBasisWord
from app.models.measure_model import AtomicMeasure, CauchyEvaluator, SpectralSample
from app.models.scene_model import ElementSampler, MatrixScene, ReassemblySpec, SlotRecipe, WordPattern
from app.models.two_projection_model import TwoProjectionModel
