from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='CharacterTableRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('group_hash', models.CharField(db_index=True, max_length=64, unique=True)),
                ('group_name', models.CharField(blank=True, max_length=100)),
                ('order', models.PositiveIntegerField()),
                ('class_count', models.PositiveIntegerField()),
                ('payload', models.JSONField()),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('hits', models.PositiveIntegerField(default=0)),
            ],
            options={
                'ordering': ['order', 'group_name'],
            },
        ),
    ]
