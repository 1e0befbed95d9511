from hypothesis import settings

# fixed example generation so repeated runs see the same cases
settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")
