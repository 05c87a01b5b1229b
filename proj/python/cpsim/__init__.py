from ._core import (
    AttackKind,
    AttackSchedule,
    AttackWindow,
    BranchRecord,
    BusKind,
    BusRecord,
    CaseParseError,
    CsvError,
    DeltaFrame,
    GenRecord,
    LimitKind,
    MetricsSummary,
    NetworkCase,
    PlotError,
    PlotKind,
    PlotRequest,
    PowerFlowOptions,
    PowerFlowSolution,
    ScheduleError,
    ShapeMismatchError,
    Side,
    SimConfig,
    SimulationLog,
    SolveStatus,
    SwitchedGen,
    TelemetryFrame,
    UnknownTargetBusError,
    ZeroImpedanceError,
    attack_mask_at,
    builtin_case14,
    build_ybus,
    compare_runs,
    compute_losses,
    compute_metrics,
    count_violations,
    default_schedule,
    detect_anomalies,
    format_double,
    load_multiplier,
    nr_solve,
    parse_matpower_case,
    parse_schedule,
    plot_kind_from_name,
    read_csv_text,
    render_plot,
    rms_deviation,
    run,
    serialize_case,
    serialize_schedule,
    sidecar_json,
    solve_with_qlims,
    to_csv,
    validate_case,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
