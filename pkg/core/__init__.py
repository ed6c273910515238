# Core numerical engine: disk function theory, truncated operators, polydisc projections
