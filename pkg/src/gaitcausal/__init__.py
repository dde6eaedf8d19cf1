"""Gait identity from Granger-causal graphs of skeleton joints.

The pipeline turns motion-capture walking sequences into directed
causal graphs over joints (one penalized lagged regression per joint),
measures similarity between graphs with a family of matrix distances,
and scores how well each distance separates the identities in an
archive. See the subpackage docstrings for the individual stages:
gaitcausal.mocap (parsing, kinematics, cycle segmentation),
gaitcausal.granger (graph extraction), gaitcausal.distances,
gaitcausal.evaluation, gaitcausal.synth (simulated ground truth), and
gaitcausal.cli (command line pipeline).
"""

from .distances import (
    DistanceId,
    ScatterModel,
    all_distance_ids,
    distance,
    distance_many,
    fit_scatter,
    mahalanobis_distance,
    operator_norm_distance,
    pairwise_matrix,
    singular_value_distance,
    vector_norm_distance,
)
from .errors import (
    CoincidentMedoids,
    DataError,
    DegenerateHeading,
    DimensionMismatch,
    EigenFailure,
    EmptyDataset,
    GaitCausalError,
    HeterogeneousSkeletons,
    JaccardUndefined,
    LagTooLarge,
    MalformedAmc,
    MalformedAsf,
    MissingScatterModel,
    NoCycleDetected,
    NonConvergence,
    NonStationary,
    NumericalError,
    TooFewSamples,
    UnknownJoint,
    ZeroDiameter,
    ZeroResidual,
)
from .evaluation import (
    AblationMatrix,
    EvalReport,
    LabeledFeatureSet,
    ablate_joint_pairs,
    ccr_loo_1nn,
    compare_distances,
    davies_bouldin,
    dissimilarity_matrix,
    dunn_index,
    label_permutation_ccr,
)
from .granger import (
    CausalGraph,
    CoefficientBlock,
    DesignMatrix,
    FlatTarget,
    GgmConfig,
    adaptive_lasso_fit,
    build_design_matrix,
    compute_ggm,
    cross_validate_lambda,
    extract_edges,
    flatten_target,
    full_shrinkage_lambda,
    information_criteria,
    kkt_residual,
    load_graph,
    mle_estimate,
    save_graph,
)
from .linalg import jacobi_svd, singular_values, singular_values_batch
from .mocap import (
    AmcMotion,
    GaitCycle,
    MotionSequence,
    Skeleton,
    euler_matrix,
    forward_kinematics,
    load_cycle,
    load_motion,
    load_sequence,
    load_skeleton,
    normalize_pose,
    parse_amc,
    parse_asf,
    save_cycle,
    save_sequence,
    segment_gait_cycles,
)
from .synth import (
    RecoveryScore,
    VarProcess,
    chain_coefficients,
    companion_spectral_radius,
    generate_var,
    random_coefficients,
    recovery_metrics,
    true_graph,
    var_gait_cycle,
)

__version__ = "0.1.0"
