from django.urls import path

from .views import (
    PrimImagesView, KernelPrimitiveView, IrrprView,
    ChevalleyWeilView, CharacterTableView
)

app_name = 'homology_app'

urlpatterns = [
    path('prim-images/', PrimImagesView.as_view(), name="prim_images"),
    path('kernel-primitive/', KernelPrimitiveView.as_view(), name="kernel_primitive"),
    path('irrpr/', IrrprView.as_view(), name="irrpr"),
    path('chevalley-weil/', ChevalleyWeilView.as_view(), name="chevalley_weil"),
    path('chartable/', CharacterTableView.as_view(), name="chartable"),
]
