from .jets import (
    BlowupChart,
    JetPrescription,
    LocalJet,
    blowdown,
    blowdown_path,
    compile_jets,
    lift_jet,
    lift_path,
    make_prescription,
    random_transversal_jet,
    tau_fiber,
)
from .sigma import (
    DEFAULT_RETRIES,
    FiberDescription,
    IncidenceDatum,
    SampleResult,
    compile_incidence,
    compile_infinitesimal,
    data_multiplicities,
    infinitesimal_rows,
    make_datum,
    point_rows,
    random_incidence_data,
    random_point_on_center,
    sample_fiber_member,
    sigma_fiber,
)
from .system import ConstraintSystem, Row

__all__ = [
    "BlowupChart",
    "JetPrescription",
    "LocalJet",
    "blowdown",
    "blowdown_path",
    "compile_jets",
    "lift_jet",
    "lift_path",
    "make_prescription",
    "random_transversal_jet",
    "tau_fiber",
    "DEFAULT_RETRIES",
    "FiberDescription",
    "IncidenceDatum",
    "SampleResult",
    "compile_incidence",
    "compile_infinitesimal",
    "data_multiplicities",
    "infinitesimal_rows",
    "make_datum",
    "point_rows",
    "random_incidence_data",
    "random_point_on_center",
    "sample_fiber_member",
    "sigma_fiber",
    "ConstraintSystem",
    "Row",
]
