# Contractive Inequality Lab - App Package
# Norm functionals, quadrature, sampling and the campaign harness
