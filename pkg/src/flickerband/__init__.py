"""flickerband: procedural flicker-banding degradation for video clips.

Renders a kinematic dual-layer stripe field onto clean frame sequences,
emits per-pixel ground-truth amplitude maps, scores predicted confidence
maps against them, and registers captured screen recordings (crop, frame
offset, LAB color) against their reference content.
"""

__version__ = "0.1.0"

from .align import (AlignmentReport, CropRect, LabStats, align_sequences,
                    detect_content_rect, lab_color_transfer, lab_stats,
                    temporal_offset)
from .compositor import (AmplitudeMap, ClipRenderer, DegradationSpec, OccupancyField,
                         SamplerRanges, StripeLayerSpec, apply_degradation, fuse,
                         render_field, sample_spec)
from .errors import (AlignmentError, ConfigError, FlickerbandError, FrameIOError,
                     InvariantViolation)
from .geometry import (FrameContext, LayerKinematics, StripeBand, orthogonal_coord,
                       phase_shift, project_static, smoothstep, stripe_index,
                       uniform_occupancy)
from .metrics import InjectionWeights, fa_mse, verify_injection_identity, zero_init_augment
from .noise import smoothed_noise_1d, smoothed_noise_2d
from .stripes import (ComplexParams, ComplexStripes, CrackedParams, CrackedStripes,
                      CurveParams, DiamondParams, curve_occupancy, diamond_occupancy,
                      make_generator)

__all__ = [name for name in dir() if not name.startswith("_")]
