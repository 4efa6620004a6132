"""pyts: existential types for Python classes, protocols and metaclasses.

The engine models classes as (generic, bounded) existential types over
record signatures, elaborates a Python source subset into them, and decides
subtyping, structural conformance, witness packing and C3 linearization.
"""

from .conformance import (
    ConformanceReport,
    MemberCheck,
    RelationEdge,
    check_witness,
    relations_graph,
    to_dot,
    type_instance_of,
)
from .core import (
    ANY,
    AnyType,
    Apply,
    Atom,
    Exists,
    Forall,
    Function,
    Product,
    Record,
    Sum,
    TypeExpr,
    Var,
    Witness,
    WitnessBinding,
    alpha_eq,
    free_vars,
    instantiate,
    normalize,
    substitute,
)
from .elaborate import (
    ModuleElaboration,
    elaborate_class,
    elaborate_function,
    elaborate_parsed,
    elaborate_source,
    infer_value_type,
)
from .frontend import (
    BaseRef,
    ClassInfo,
    MemberSig,
    ParsedModule,
    annotation_to_type,
    parse_module,
    parse_source,
)
from .mro import c3_linearize, full_registry, object_instance_of, subclass_of
from .prelude import (
    Definition,
    Family,
    FamilyIndex,
    TypeEnv,
    def_type,
    family_type,
    load_virtual_table,
    object_et,
    prelude_env,
    type_et,
)
from .render import parse_type, render_type, type_from_json, type_to_json
from .subtyping import Derivation, subtype

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
