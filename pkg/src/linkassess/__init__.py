"""Link assessment and tie-strength ranking from exogenous interaction networks."""

from .classifiers import ModelSpec, TrainedModel, cross_validate, fit, kfold_split
from .experiments import (AssessmentPlan, Dataset, NoisePlan, inject_noise, noise_success_rate,
                          planted_multiplex, run_assessment, run_noise_experiment, run_null_model)
from .features import (FeatureDataModel, FeatureSchema, Instance, build_aggregated_fdm, build_fdm,
                       feature_correlation_matrix, pair_features)
from .graph import (Network, avg_clustering, density, edge_overlap, load_edge_list, neighbors,
                    random_graph)
from .metrics import EvaluationReport, confusion, roc_auc, weighted_metrics
from .ranking import RankingResult, best_ranker, rank_ties, ranking_error

__version__ = "0.1.0"
