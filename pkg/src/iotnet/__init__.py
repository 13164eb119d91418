"""Input-output network analysis: strengths, assortativity, centrality, communities."""

from importlib import resources
from pathlib import Path

from .assort import (
    ASSORT_TYPES,
    AssortativityEstimate,
    AssortType,
    assortativity_profile,
    compute_assortativity,
    jackknife,
)
from .centrality import (
    RankTable,
    ScoreVector,
    extended_pagerank,
    standard_pagerank,
    top_k,
    weighted_hits,
    weighted_pagerank,
)
from .community import (
    AmiMatrix,
    Partition,
    ami,
    ami_matrix,
    ami_triangle,
    greedy_communities,
    modularity,
)
from .errors import (
    AssortativityError,
    ConvergenceError,
    DegenerateError,
    EmptyNetworkError,
    IotNetError,
    NodeLookupError,
    ParameterError,
    ParseError,
    PartitionError,
    RegistryError,
)
from .iot import BalanceReport, IOTable, parse_iot, to_network, validate_balance, write_iot
from .network import (
    IONetwork,
    StrengthSummary,
    in_strength,
    out_strength,
    remove_node,
    strength_summary,
    total_strength,
    total_weight,
)
from .registry import STAN, SectorRegistry

__version__ = "0.1.0"


def toy_data_dir() -> Path:
    """Directory holding the bundled 5-sector toy tables (series A and B, 2000-2002)."""
    return Path(str(resources.files(__name__) / "data" / "toy"))
