"""Random group presentations: sampling, small cancellation analysis,
subword coverage, van Kampen diagram checks and conformal dimension bounds."""

from __future__ import annotations

__version__ = "0.1.0"

from .cancellation import ConjugateIndex, PieceReport, SmallCancellationVerdict, is_c_prime, piece_report
from .counting import (
    EndpointCounts,
    count_cyclically_reduced,
    count_cyclically_reduced_upto,
    endpoint_counts,
    omission_bound,
)
from .coverage import CoverageReport, covers_all, m_star
from .dehn import dehn_reduce, is_trivial
from .errors import (
    DiagramError,
    InfeasibleConfigError,
    PreconditionError,
    PresentationParseError,
    RandGroupsError,
    WordError,
)
from .fileio import read_presentation, write_presentation
from .presentation import Presentation, genus_presentation
from .sampler import (
    DensityConfig,
    FewRelatorConfig,
    density_relator_count,
    make_rng,
    sample_cyclically_reduced,
    sample_density,
    sample_few_relator,
)
from .words import cyclic_conjugates, cyclic_reduce, format_word, inverse, parse_word, reduce
