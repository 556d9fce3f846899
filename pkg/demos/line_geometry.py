"""Two skew lines as unit dual vectors: their dual angle is angle + eps distance."""

from dual_darboux import from_dual, line_from_point_direction, to_dual

a = line_from_point_direction([0, 0, 0], [1, 0, 0])
b = line_from_point_direction([0, 0, 2], [1, 1, 0])
ang = a.angle_to(b)
print(f"angle {ang.theta:.6f} rad, distance {ang.theta_star:.6f}")

z = to_dual(b)
print("dual vector:", z.real, "+ eps", z.dual)
back = from_dual(z)
print("recovered moment:", back.moment)
