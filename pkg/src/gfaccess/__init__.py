"""Pilot-protected uplink grant-free access: superimposed pilot codes,
hybrid-attack activity detection, SIMO-OFDM matched-filter simulation and the
closed-form reliability / latency / accessibility analysis."""
from .attack import AttackerConfig, AttackMode, apply_attack_counts
from .code import (
    H2dfCode,
    PilotPhase,
    assign_clusters,
    boolean_sum,
    build_code,
    decompose,
    encode_pilot,
    phase_of,
)
from .detection import ActivityReport, DetectionConfig, calibrate_threshold, count_signals, detect_activity
from .reliability import SystemConfig, evaluate, sweep

__version__ = "0.1.0"
