"""hmiv: a workbench for modelling and verifying human-machine interface logic.

Subsystems:
  statechart   interaction-logic models (modes, typed variables, timers)
  dsl          the .hmi document format: parser, serializer, validation
  petri        place/transition nets with invariant and reachability analysis
  taskmodel    hierarchical task trees, simulation, scenarios, workload
  checker      obligations, property templates, bounded reachability
  coexec       task/system co-execution and divergence detection
  fcu          barometer data-entry case study (numerics and fixtures)
  cli/service  command line front end and the live-session HTTP service
"""

__version__ = "0.1.0"
