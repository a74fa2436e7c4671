"""homoclinic-covers: symbolic covers and pseudo-covers of α_f.

Homoclinic points, symbolic covers and pseudo-covers for the shift
automorphism α_f of the compact abelian group X_f defined by an
integer Laurent polynomial f.
"""

__title__ = "covers"
__version__ = "2024"
__author__ = "homoclinic-covers contributors"
__license__ = "Apache-2.0"
__copyright__ = "Copyright homoclinic-covers contributors"
