"""
Example script on how to use the nhsim library.

For the documentation. open a python and type:
>>> import nhsim
>>> help(nhsim.integrate)
"""

# import the library
import numpy as np
import nhsim

# a vertical disk rolling on a table of radius 3
disk = nhsim.make_rolling_disk(a=3.0)

# initial pair: start at the centre heading 0.3 rad, rolling rate 1.3,
# turning rate 0.1, one step of the exact arc projected onto D_d
h = 0.01
q0 = np.array([0.0, 0.0, 0.0, 0.3])
q1 = nhsim.project_to_constraints(disk.constraints, q0,
                                  nhsim.rolling_disk_exact(q0, 1.3, 0.1, h))

# integrate 250 steps
trajectory = nhsim.integrate(disk.system, disk.constraints,
                             disk.discrete_lagrangian, disk.inequalities,
                             q0, q1, h, 250)

# every impact comes with its record
for record in trajectory.impacts:
    print("impact on %s at t=%.6f, normal multiplier %.6e"
          % (record.label, record.t_bar, record.normal_multiplier))

# this is just an example on what to expect and a possible reaction
if trajectory.impact_count != 1:
    raise Exception("expected the disk to hit the edge once")

# the continuous jump at the recorded impact point
record = trajectory.impacts[0]
v_minus = (record.q_bar - record.q_prev) / (record.alpha * record.window)
v_minus = nhsim.project_velocity(disk.system, disk.constraints, record.q_bar, v_minus)
v_plus, lam_bar, nu = nhsim.continuous_jump(disk.system, disk.constraints,
                                            disk.inequality(record.label),
                                            record.q_bar, v_minus)
print("continuous jump: v+ =", v_plus)
