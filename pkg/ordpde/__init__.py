"""ordpde: generalized solutions of D_y u + F(x, y, u, D_x u) = 0, u(x, 0) = f(x)."""

__version__ = "0.1.0"
