from .carry import PAPER_INIT_CL, PAPER_INIT_CM, carry_bits, carry_lut_inits, inject_carry_fault
from .cells import compress_6to3, compress_layer, compress_terms, csa_3to2, layer_count
from .datapath import (CycleReport, HwPlan, HwState, HwStepRecord, RedundantResidue, cycle_report,
                       gen_temp_pps, hw_run, hw_step, initial_state, make_plan)
from .encoding import (EncodingTable, LutInitMatrix, PartialProduct, build_encoding_table,
                       encode_windows, lut_init_matrix)
from .pipeline import HwConfig, LevelReport, default_schedule, level_budget_report, quotient_path_levels
