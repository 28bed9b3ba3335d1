"""Trees, ideals and algebraic sums in the integer Baire space, at finite windows."""
from .words import Word, WordError, enum_index, enum_word, word_add, word_sub, zigzag_int, zigzag_rank
from .trees import (
    SilverSpec,
    TreeError,
    TreeSpec,
    Truncation,
    leq_n,
    level,
    make_full,
    make_laver,
    make_miller,
    make_silver,
    make_uniformly_perfect,
    sumset,
    truncate,
)
from .ideals import CertError, CoverFamily, IntervalCert, MeagerWitness, Slalom, cover_to_slalom, slalom_to_cover
from .shrink import (
    ShrinkError,
    fakenull_shrink_perfect,
    miller_null_subtree,
    mminus_shrink_perfect,
    mminus_shrink_silver,
    sacks_fusion,
    sacks_shrink_meager,
)
from .escape import (
    EscapeError,
    EscapeTrace,
    laver_sum_decompose,
    m_not_mminus_branch,
    miller_meager_escape,
    miller_pair_escape,
    silver_nwd_escape,
)
from .bench import ScenarioReport, Window, run_scenario

__version__ = "0.1.0"
