"""Backend ingestion service: store, intake, dedup, leaderboard."""

from .dedup import DEFAULT_DEDUP_RADIUS_M, DuplicateCluster, cluster_duplicates
from .ingest import Ack, IngestionService
from .leaderboard import LeaderboardEntry, leaderboard
from .store import ReportStore

__all__ = [
    "Ack",
    "DEFAULT_DEDUP_RADIUS_M",
    "DuplicateCluster",
    "IngestionService",
    "LeaderboardEntry",
    "ReportStore",
    "cluster_duplicates",
    "leaderboard",
]
