from hypothesis import settings

settings.register_profile("pzfsim", deadline=None, max_examples=50)
settings.load_profile("pzfsim")
