# Quantum services package
