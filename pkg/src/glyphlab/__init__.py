"""glyphlab: seeded stochastic character-image perturbation and a small
neural stack for out-of-distribution training experiments at desk scale.
"""

from .dataset import LabeledDataset, Split, export_contact_sheet, read_cds, write_cds
from .pipeline import (
    DEFAULT_MIX,
    GlyphSource,
    PipelineSpec,
    SourceMix,
    generate_dataset,
    perturb,
    preset_spec,
    standin_sources,
    synthetic_source,
)
from .rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MIX",
    "GlyphSource",
    "LabeledDataset",
    "PipelineSpec",
    "RngStream",
    "SourceMix",
    "Split",
    "export_contact_sheet",
    "generate_dataset",
    "perturb",
    "preset_spec",
    "read_cds",
    "standin_sources",
    "synthetic_source",
    "write_cds",
    "__version__",
]
