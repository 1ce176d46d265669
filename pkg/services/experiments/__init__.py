# Experiment services package
