# -*- coding: utf-8 -*-
# Copyright © 2020-2021 resilient-dgd authors

#######################################################################
# This Source Code Form is subject to the terms of the Mozilla Public #
# License, v. 2.0. If a copy of the MPL was not distributed with this #
# file, You can obtain one at http://mozilla.org/MPL/2.0/.            #
#######################################################################


from .faults import (FaultBehavior,     # noqa
                     get_fault,         # noqa
                     get_fault_names,   # noqa
                     make_fault,        # noqa
                     agent_rng)         # noqa
from .config import (BoxRegion,         # noqa
                     StepSchedule,      # noqa
                     SimConfig,         # noqa
                     read_config_file,  # noqa
                     load_config)       # noqa
from .engine import (project_box,       # noqa
                     phi,               # noqa
                     RoundRecord,       # noqa
                     Trajectory,        # noqa
                     DGDState,          # noqa
                     DGDSimulation,     # noqa
                     eliminate_agent,   # noqa
                     run_dgd)           # noqa
