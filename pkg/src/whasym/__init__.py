"""Wiener-Hopf determinant asymptotics with Fisher-Hartwig singularities."""
