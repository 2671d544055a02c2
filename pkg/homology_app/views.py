import logging

from django.conf import settings
from rest_framework import status
from rest_framework.response import Response
from rest_framework.views import APIView
from drf_yasg.utils import swagger_auto_schema
from drf_yasg import openapi

from group_app.exceptions import PrimHomError, UsageError
from group_app.table_cache import cached_character_table

from .reports import chartable_report, chevalley_weil_report, irrpr_report, kernel_primitive_report, \
    prim_images_report
from .serializer import hom_from_spec, load_group

# Set up logging
logger = logging.getLogger(__name__)

STATUS_BY_EXIT_CODE = {
    1: status.HTTP_422_UNPROCESSABLE_ENTITY,
    2: status.HTTP_400_BAD_REQUEST,
    3: status.HTTP_507_INSUFFICIENT_STORAGE,
}

hom_body = openapi.Schema(
    type=openapi.TYPE_OBJECT,
    required=['hom'],
    properties={
        'hom': openapi.Schema(
            type=openapi.TYPE_OBJECT,
            description='{"group": group spec, "images": [element labels or indices], "rank": n}',
        ),
        'budget': openapi.Schema(type=openapi.TYPE_INTEGER, description='State budget for orbit searches'),
    },
    example={'hom': {'group': {'kind': 'abelian', 'moduli': [6]}, 'images': [2, 3]}},
)

group_body = openapi.Schema(
    type=openapi.TYPE_OBJECT,
    required=['group'],
    properties={'group': openapi.Schema(type=openapi.TYPE_OBJECT, description='Group spec')},
    example={'group': {'kind': 'metacyclic', 'm': 3, 'k': 8, 'r': 2}},
)

error_responses = {
    400: openapi.Response(
        description="Invalid spec",
        examples={
            "application/json": {
                "success": False,
                "message": "Invalid homomorphism spec",
                "error": {"error": "SchemaError", "message": "Invalid homomorphism spec"}
            }
        }
    ),
    422: openapi.Response(description="A mathematical check failed"),
    507: openapi.Response(description="State budget exceeded"),
}


class ReportView(APIView):
    """Runs a report builder on the request body and wraps the result in the response envelope."""
    success_message = "Report computed successfully"

    def build(self, data):
        raise NotImplementedError

    def post(self, request, *args, **kwargs):
        try:
            report = self.build(request.data)
        except PrimHomError as e:
            logger.warning(f"{type(self).__name__} rejected request: {e.message}")
            return Response({
                "success": False,
                "message": e.message,
                "error": e.to_dict()
            }, status=STATUS_BY_EXIT_CODE.get(e.exit_code, status.HTTP_400_BAD_REQUEST))
        return Response({
            "success": True,
            "message": self.success_message,
            "data": report
        }, status=status.HTTP_200_OK)

    @staticmethod
    def budget(data):
        value = data.get('budget')
        if value is None:
            return getattr(settings, 'PHL_STATE_BUDGET', 10 ** 8)
        try:
            value = int(value)
        except (TypeError, ValueError):
            value = 0
        if value <= 0:
            raise UsageError("Budget must be a positive integer", budget=data.get('budget'))
        return value


class PrimImagesView(ReportView):
    success_message = "Primitive images computed successfully"

    @swagger_auto_schema(
        operation_description="Exhaust the extended Nielsen orbit of the homomorphism and list every element that is the image of a primitive element, with a witness word for each.",
        operation_summary="Primitive Images",
        request_body=hom_body,
        responses={200: openapi.Response(description="Primitive image report"), **error_responses},
        tags=['Primitive Images']
    )
    def post(self, request, *args, **kwargs):
        return super().post(request, *args, **kwargs)

    def build(self, data):
        return prim_images_report(hom_from_spec(data.get('hom'), allow_paths=False), budget=self.budget(data))


class KernelPrimitiveView(ReportView):
    success_message = "Kernel search finished"

    @swagger_auto_schema(
        operation_description="Decide whether the kernel of the homomorphism contains a primitive element; returns a verified witness word when it does.",
        operation_summary="Primitive Element in the Kernel",
        request_body=hom_body,
        responses={200: openapi.Response(description="Kernel verdict"), **error_responses},
        tags=['Primitive Images']
    )
    def post(self, request, *args, **kwargs):
        return super().post(request, *args, **kwargs)

    def build(self, data):
        return kernel_primitive_report(hom_from_spec(data.get('hom'), allow_paths=False), budget=self.budget(data))


class IrrprView(ReportView):
    success_message = "Irrpr computed successfully"

    @swagger_auto_schema(
        operation_description="Character rows in which the image of some primitive element fixes a nonzero vector.",
        operation_summary="Irrpr Rows",
        request_body=hom_body,
        responses={200: openapi.Response(description="Irrpr report"), **error_responses},
        tags=['Representations']
    )
    def post(self, request, *args, **kwargs):
        return super().post(request, *args, **kwargs)

    def build(self, data):
        phi = hom_from_spec(data.get('hom'), allow_paths=False)
        return irrpr_report(phi, cached_character_table(phi.target), budget=self.budget(data))


class ChevalleyWeilView(ReportView):
    success_message = "Homology of the cover decomposed"

    @swagger_auto_schema(
        operation_description="Build the regular cover of the rose, compute its first homology with the deck action and decompose it into irreducibles.",
        operation_summary="Chevalley-Weil Check",
        request_body=hom_body,
        responses={200: openapi.Response(description="Decomposition report"), **error_responses},
        tags=['Representations']
    )
    def post(self, request, *args, **kwargs):
        return super().post(request, *args, **kwargs)

    def build(self, data):
        phi = hom_from_spec(data.get('hom'), allow_paths=False)
        return chevalley_weil_report(phi, cached_character_table(phi.target))


class CharacterTableView(ReportView):
    success_message = "Character table retrieved successfully"

    @swagger_auto_schema(
        operation_description="Exact character table of a group, computed once and served from the table cache afterwards.",
        operation_summary="Character Table",
        request_body=group_body,
        responses={200: openapi.Response(description="Character table"), **error_responses},
        tags=['Representations']
    )
    def post(self, request, *args, **kwargs):
        return super().post(request, *args, **kwargs)

    def build(self, data):
        group = load_group(data.get('group'), allow_paths=False)
        return chartable_report(cached_character_table(group))
